#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace qbasket {

struct PriceBounds {
  double low = 0.0;
  double high = 0.0;
};

/// Discretized terminal-price distribution of one asset on 2^n points.
struct AssetGrid {
  int num_qubits = 0;
  PriceBounds bounds;
  std::vector<double> values;  // equally spaced, endpoints inclusive
  std::vector<double> probs;

  double expectation() const;
};

/// Basket value distribution collapsed onto 2^nbq equally spaced points.
struct BinnedBasketDistribution {
  int nbq = 0;
  std::vector<double> values;
  std::vector<double> probs;

  double expectation() const;
};

/// Log-space parameterization of the terminal lognormal law.
struct LognormalParams {
  double log_mean = 0.0;  // mean of ln S_T
  double log_std = 0.0;   // std of ln S_T
};

/// ln S_T ~ N(ln s0 + mu_T, sigma_T^2), or with mu_T - sigma_T^2/2 when
/// `ito_correction` is set.
LognormalParams lognormal_params(double s0, double mu_T, double sigma_T, bool ito_correction = false);

double lognormal_pdf(double x, const LognormalParams& p) noexcept;

/// [s0 exp(mu_T - 3 sigma_T), s0 exp(mu_T + 3 sigma_T)]
PriceBounds asset_price_bounds(double s0, double mu_T, double sigma_T);

AssetGrid discretize_lognormal(double s0, double mu_T, double sigma_T, int num_qubits,
                               bool ito_correction = false);

/// Same as above on caller-supplied bounds (used to give every asset a
/// common price window in the multi-register encoding).
AssetGrid discretize_lognormal(const LognormalParams& params, PriceBounds bounds, int num_qubits);

/// Equally spaced points l + j (h - l) / (count - 1), j = 0..count-1.
std::vector<double> uniform_grid(PriceBounds bounds, std::size_t count);

using JointVisitor = std::function<void(double basket_value, double prob)>;

/// Default ceiling on the number of joint grid points enumerated.
inline constexpr std::uint64_t kMaxJointPoints = std::uint64_t{1} << 30;

/// Enumerates every combination of grid points under independence. The
/// visitor receives sum_i w_i v_i and prod_i p_i. Last grid varies fastest.
void for_each_joint_point(std::span<const AssetGrid> grids, std::span<const double> weights,
                          const JointVisitor& visit, std::uint64_t max_points = kMaxJointPoints);

/// Materialized joint grid; only sensible for small instances.
std::vector<std::pair<double, double>> joint_basket_grid(std::span<const AssetGrid> grids,
                                                         std::span<const double> weights);

/// [sum_i w_i low_i, sum_i w_i high_i]
PriceBounds basket_bounds(std::span<const AssetGrid> grids, std::span<const double> weights);

/// Incremental nearest-point binner onto 2^nbq equally spaced points.
/// Ties (exactly halfway) go to the lower index.
class BasketBinner {
 public:
  BasketBinner(PriceBounds bounds, int nbq);

  void add(double value, double prob);
  BinnedBasketDistribution finish() const;

  static std::size_t nearest_index(double value, PriceBounds bounds, std::size_t count);

 private:
  PriceBounds bounds_;
  int nbq_;
  double slack_;
  std::vector<double> values_;
  std::vector<double> mass_;
  std::vector<double> carry_;
};

BinnedBasketDistribution bin_basket_distribution(std::span<const std::pair<double, double>> joint,
                                                 PriceBounds bounds, int nbq);

/// Streams the joint grid straight into the binner.
BinnedBasketDistribution bin_joint_grid(std::span<const AssetGrid> grids, std::span<const double> weights,
                                        PriceBounds bounds, int nbq,
                                        std::uint64_t max_points = kMaxJointPoints);

/// max_i n_i + ceil(log2 d)
int default_basket_qubits(std::span<const int> asset_qubits);

/// sum_j pi_j max(0, v_j - K)
double binned_expected_payoff(const BinnedBasketDistribution& dist, double strike_K);

}  // namespace qbasket
