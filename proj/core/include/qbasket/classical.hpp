#pragma once

#include <cstdint>
#include <span>

#include "qbasket/market_data.hpp"

namespace qbasket {

/// Standard normal CDF, Phi(x) = erfc(-x / sqrt 2) / 2.
///
/// std::erfc (glibc) evaluates erfc with piecewise rational minimax
/// approximations and an exp(-x^2) factorization in the tails, accurate to
/// about one ulp. Going through erfc instead of 1 + erf keeps full relative
/// accuracy in the lower tail, so the absolute error is far below 1e-12.
double normal_cdf(double x) noexcept;

/// Inverse standard normal CDF for p in (0, 1).
double normal_quantile(double p);

/// European call. Limits: K = 0 gives s0, sigma = 0 gives max(0, s0 - K e^{-rT}).
double black_scholes_call(double s0, double strike_K, double r, double sigma, double T);

struct MCConfig {
  std::uint64_t paths = 100000;
  std::uint64_t seed = 42;
  bool antithetic = false;
  /// Worker threads. Results do not depend on this value.
  unsigned workers = 1;
};

struct MCResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t paths = 0;
};

/// Discounted mean payoff e^{-rT} mean(max(0, sum_i w_i S_T^i - K)) with
/// ln S_T^i ~ N(ln s0_i + mu_T_i (- sigma_T_i^2 / 2 if ito_correction), sigma_T_i^2),
/// assets independent. Normals come from inverse-transform sampling of a
/// counter-based uniform stream keyed by (seed, path, asset), so the result is
/// bit-identical for any worker count.
MCResult monte_carlo_basket(std::span<const AssetStats> stats, std::span<const double> weights, double strike_K,
                            double r, double T, const MCConfig& cfg, bool ito_correction = false);

/// Uniform in (0, 1) for a given (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Single-asset proxy for the basket: s0 = basket value, sigma = sum_i w_i sigma_i (annualized).
double basket_proxy_volatility(std::span<const AssetStats> stats, std::span<const double> weights);

}  // namespace qbasket
