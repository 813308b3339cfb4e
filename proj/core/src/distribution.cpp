#include "qbasket/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qbasket/error.hpp"
#include "qbasket/numeric.hpp"

namespace qbasket {

namespace {

double weighted_mean(std::span<const double> values, std::span<const double> probs) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * probs[i];
  return acc.value();
}

void check_qubits(int n) {
  if (n < 1 || n > 30) throw Error(ErrorCode::InvalidInput, "qubit count " + std::to_string(n) + " outside [1,30]");
}

template <typename Visitor>
void enumerate_joint(std::span<const AssetGrid> grids, std::span<const double> weights, Visitor&& visit,
                     std::uint64_t max_points) {
  if (grids.empty() || grids.size() != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(grids.size()) + " grids vs " +
                                                  std::to_string(weights.size()) + " weights");
  }
  std::uint64_t total = 1;
  for (const auto& g : grids) {
    if (g.values.size() != g.probs.size() || g.values.empty()) {
      throw Error(ErrorCode::DimensionMismatch, "grid values/probs length mismatch");
    }
    if (total > max_points / g.values.size()) {
      throw Error(ErrorCode::JointGridTooLarge, "joint grid exceeds " + std::to_string(max_points) + " points");
    }
    total *= g.values.size();
  }

  const std::size_t d = grids.size();
  // Partial sums/products per depth; the innermost grid is unrolled.
  std::vector<double> value_prefix(d + 1, 0.0);
  std::vector<double> prob_prefix(d + 1, 1.0);
  std::vector<std::size_t> index(d, 0);
  const AssetGrid& inner = grids[d - 1];
  const double inner_w = weights[d - 1];

  std::size_t depth = 0;
  for (;;) {
    // Descend to the innermost grid.
    while (depth + 1 < d) {
      const AssetGrid& g = grids[depth];
      value_prefix[depth + 1] = value_prefix[depth] + weights[depth] * g.values[index[depth]];
      prob_prefix[depth + 1] = prob_prefix[depth] * g.probs[index[depth]];
      ++depth;
    }
    const double v0 = value_prefix[d - 1];
    const double p0 = prob_prefix[d - 1];
    for (std::size_t j = 0; j < inner.values.size(); ++j) {
      visit(v0 + inner_w * inner.values[j], p0 * inner.probs[j]);
    }
    // Odometer increment over the outer grids.
    if (d == 1) return;
    std::size_t level = d - 1;
    for (;;) {
      if (level == 0) return;
      --level;
      if (++index[level] < grids[level].values.size()) break;
      index[level] = 0;
    }
    depth = level;
  }
}

}  // namespace

double AssetGrid::expectation() const { return weighted_mean(values, probs); }

double BinnedBasketDistribution::expectation() const { return weighted_mean(values, probs); }

LognormalParams lognormal_params(double s0, double mu_T, double sigma_T, bool ito_correction) {
  if (!(s0 > 0.0)) throw Error(ErrorCode::InvalidInput, "s0 must be positive");
  if (!(sigma_T > 0.0)) {
    throw Error(ErrorCode::DegenerateVolatility, "sigma_T = " + std::to_string(sigma_T));
  }
  LognormalParams p;
  p.log_mean = std::log(s0) + mu_T - (ito_correction ? 0.5 * sigma_T * sigma_T : 0.0);
  p.log_std = sigma_T;
  return p;
}

double lognormal_pdf(double x, const LognormalParams& p) noexcept {
  if (!(x > 0.0)) return 0.0;
  const double z = (std::log(x) - p.log_mean) / p.log_std;
  return std::exp(-0.5 * z * z) / (x * p.log_std * std::sqrt(2.0 * std::numbers::pi));
}

PriceBounds asset_price_bounds(double s0, double mu_T, double sigma_T) {
  if (!(s0 > 0.0)) throw Error(ErrorCode::InvalidInput, "s0 must be positive");
  if (!(sigma_T > 0.0)) {
    throw Error(ErrorCode::DegenerateVolatility, "sigma_T = " + std::to_string(sigma_T));
  }
  return {s0 * std::exp(mu_T - 3.0 * sigma_T), s0 * std::exp(mu_T + 3.0 * sigma_T)};
}

std::vector<double> uniform_grid(PriceBounds bounds, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = bounds.low;
    return out;
  }
  const double step = (bounds.high - bounds.low) / static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) out[j] = bounds.low + static_cast<double>(j) * step;
  out.back() = bounds.high;
  return out;
}

AssetGrid discretize_lognormal(const LognormalParams& params, PriceBounds bounds, int num_qubits) {
  check_qubits(num_qubits);
  if (!(bounds.high > bounds.low) || !(bounds.low > 0.0)) {
    throw Error(ErrorCode::DegenerateBounds, "need 0 < low < high");
  }
  AssetGrid grid;
  grid.num_qubits = num_qubits;
  grid.bounds = bounds;
  grid.values = uniform_grid(bounds, std::size_t{1} << num_qubits);
  grid.probs.resize(grid.values.size());
  CompensatedSum total;
  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    grid.probs[j] = lognormal_pdf(grid.values[j], params);
    total += grid.probs[j];
  }
  const double norm = total.value();
  if (!(norm > 0.0)) throw Error(ErrorCode::DegenerateVolatility, "density vanishes on the whole grid");
  for (double& p : grid.probs) p /= norm;
  return grid;
}

AssetGrid discretize_lognormal(double s0, double mu_T, double sigma_T, int num_qubits, bool ito_correction) {
  const PriceBounds bounds = asset_price_bounds(s0, mu_T, sigma_T);
  return discretize_lognormal(lognormal_params(s0, mu_T, sigma_T, ito_correction), bounds, num_qubits);
}

PriceBounds basket_bounds(std::span<const AssetGrid> grids, std::span<const double> weights) {
  if (grids.size() != weights.size() || grids.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "grids and weights must be non-empty and aligned");
  }
  CompensatedSum lo;
  CompensatedSum hi;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    lo += weights[i] * grids[i].bounds.low;
    hi += weights[i] * grids[i].bounds.high;
  }
  return {lo.value(), hi.value()};
}

void for_each_joint_point(std::span<const AssetGrid> grids, std::span<const double> weights,
                          const JointVisitor& visit, std::uint64_t max_points) {
  enumerate_joint(grids, weights, visit, max_points);
}

std::vector<std::pair<double, double>> joint_basket_grid(std::span<const AssetGrid> grids,
                                                         std::span<const double> weights) {
  std::vector<std::pair<double, double>> out;
  for_each_joint_point(grids, weights, [&](double v, double p) { out.emplace_back(v, p); });
  return out;
}

BasketBinner::BasketBinner(PriceBounds bounds, int nbq) : bounds_(bounds), nbq_(nbq) {
  check_qubits(nbq);
  if (!(bounds.high > bounds.low)) throw Error(ErrorCode::DegenerateBounds, "binning needs low < high");
  slack_ = 1e-9 * std::max(1.0, std::max(std::abs(bounds.low), std::abs(bounds.high)));
  values_ = uniform_grid(bounds, std::size_t{1} << nbq);
  mass_.assign(values_.size(), 0.0);
  carry_.assign(values_.size(), 0.0);
}

std::size_t BasketBinner::nearest_index(double value, PriceBounds bounds, std::size_t count) {
  const double step = (bounds.high - bounds.low) / static_cast<double>(count - 1);
  const double t = (value - bounds.low) / step;
  if (t <= 0.0) return 0;
  const double base = std::floor(t);
  std::size_t k = static_cast<std::size_t>(base);
  if (t - base > 0.5) ++k;
  return std::min(k, count - 1);
}

void BasketBinner::add(double value, double prob) {
  if (value < bounds_.low - slack_ || value > bounds_.high + slack_) {
    throw Error(ErrorCode::ValueOutOfRange,
                "basket value " + std::to_string(value) + " outside [" + std::to_string(bounds_.low) + ", " +
                    std::to_string(bounds_.high) + "]");
  }
  const std::size_t k = nearest_index(value, bounds_, values_.size());
  // Per-bin Neumaier accumulation.
  double& s = mass_[k];
  const double t = s + prob;
  carry_[k] += std::abs(s) >= std::abs(prob) ? (s - t) + prob : (prob - t) + s;
  s = t;
}

BinnedBasketDistribution BasketBinner::finish() const {
  BinnedBasketDistribution out;
  out.nbq = nbq_;
  out.values = values_;
  out.probs.resize(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) out.probs[k] = mass_[k] + carry_[k];
  return out;
}

BinnedBasketDistribution bin_basket_distribution(std::span<const std::pair<double, double>> joint,
                                                 PriceBounds bounds, int nbq) {
  BasketBinner binner(bounds, nbq);
  for (const auto& [v, p] : joint) binner.add(v, p);
  return binner.finish();
}

BinnedBasketDistribution bin_joint_grid(std::span<const AssetGrid> grids, std::span<const double> weights,
                                        PriceBounds bounds, int nbq, std::uint64_t max_points) {
  BasketBinner binner(bounds, nbq);
  enumerate_joint(grids, weights, [&](double v, double p) { binner.add(v, p); }, max_points);
  return binner.finish();
}

int default_basket_qubits(std::span<const int> asset_qubits) {
  if (asset_qubits.empty()) throw Error(ErrorCode::DimensionMismatch, "no assets");
  const int widest = *std::max_element(asset_qubits.begin(), asset_qubits.end());
  int extra = 0;
  while ((std::size_t{1} << extra) < asset_qubits.size()) ++extra;
  return widest + extra;
}

double binned_expected_payoff(const BinnedBasketDistribution& dist, double strike_K) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < dist.values.size(); ++j) {
    const double payoff = dist.values[j] - strike_K;
    if (payoff > 0.0) acc += dist.probs[j] * payoff;
  }
  return acc.value();
}

}  // namespace qbasket
