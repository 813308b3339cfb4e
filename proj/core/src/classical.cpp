#include "qbasket/classical.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "qbasket/error.hpp"
#include "qbasket/numeric.hpp"

namespace qbasket {

namespace {

constexpr std::uint64_t kChunkPaths = 8192;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Welford running moments, merged with Chan's pairwise update.
struct ChunkTotals {
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t samples = 0;

  void add(double x) noexcept {
    ++samples;
    const double delta = x - mean;
    mean += delta / static_cast<double>(samples);
    m2 += delta * (x - mean);
  }

  void merge(const ChunkTotals& other) noexcept {
    if (other.samples == 0) return;
    const double na = static_cast<double>(samples);
    const double nb = static_cast<double>(other.samples);
    const double n = na + nb;
    const double delta = other.mean - mean;
    mean += delta * nb / n;
    m2 += other.m2 + delta * delta * na * nb / n;
    samples += other.samples;
  }
};

}  // namespace

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw Error(ErrorCode::InvalidInput, "quantile needs p in (0,1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double black_scholes_call(double s0, double strike_K, double r, double sigma, double T) {
  if (!(s0 > 0.0)) throw Error(ErrorCode::InvalidInput, "s0 must be positive");
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidInput, "T must be positive");
  if (sigma < 0.0 || strike_K < 0.0) throw Error(ErrorCode::InvalidInput, "sigma and K must be non-negative");
  if (strike_K == 0.0) return s0;
  const double discount = std::exp(-r * T);
  if (sigma == 0.0) return std::max(0.0, s0 - strike_K * discount);
  const double vol = sigma * std::sqrt(T);
  const double d1 = (std::log(s0 / strike_K) + (r + 0.5 * sigma * sigma) * T) / vol;
  const double d2 = d1 - vol;
  return s0 * normal_cdf(d1) - strike_K * discount * normal_cdf(d2);
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
  // 53 random bits, shifted off both endpoints.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

MCResult monte_carlo_basket(std::span<const AssetStats> stats, std::span<const double> weights, double strike_K,
                            double r, double T, const MCConfig& cfg, bool ito_correction) {
  if (stats.size() != weights.size() || stats.empty()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(stats.size()) + " assets vs " +
                                                  std::to_string(weights.size()) + " weights");
  }
  if (cfg.paths < 1) throw Error(ErrorCode::InvalidInput, "paths must be >= 1");
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidInput, "T must be positive");

  const std::size_t d = stats.size();
  std::vector<double> log_mean(d);
  std::vector<double> log_std(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(stats[i].s0 > 0.0)) throw Error(ErrorCode::InvalidInput, "s0 must be positive");
    log_std[i] = stats[i].sigma_T;
    log_mean[i] = std::log(stats[i].s0) + stats[i].mu_T -
                  (ito_correction ? 0.5 * stats[i].sigma_T * stats[i].sigma_T : 0.0);
  }
  const double discount = std::exp(-r * T);

  // With antithetic pairs, one sample is the mean payoff of (z, -z).
  const std::uint64_t samples = cfg.antithetic ? (cfg.paths + 1) / 2 : cfg.paths;
  const std::uint64_t chunks = (samples + kChunkPaths - 1) / kChunkPaths;
  std::vector<ChunkTotals> totals(chunks);

  auto payoff = [&](std::uint64_t sample, double sign) {
    double basket = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double log_s = log_mean[i];
      if (log_std[i] > 0.0) {
        const double u = counter_uniform(cfg.seed, sample * d + i);
        log_s += sign * log_std[i] * normal_quantile(u);
      }
      basket += weights[i] * std::exp(log_s);
    }
    return discount * std::max(0.0, basket - strike_K);
  };

  auto run_chunk = [&](std::uint64_t c) {
    ChunkTotals& t = totals[c];
    const std::uint64_t begin = c * kChunkPaths;
    const std::uint64_t end = std::min(samples, begin + kChunkPaths);
    for (std::uint64_t m = begin; m < end; ++m) {
      double x = payoff(m, 1.0);
      if (cfg.antithetic) x = 0.5 * (x + payoff(m, -1.0));
      t.add(x);
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunks; c += workers) run_chunk(c);
      });
    }
  }

  // Fixed chunk order keeps the reduction independent of scheduling.
  ChunkTotals all;
  for (const auto& t : totals) all.merge(t);
  const double n = static_cast<double>(samples);
  MCResult out;
  out.paths = cfg.antithetic ? 2 * samples : samples;
  out.estimate = all.mean;
  if (samples > 1) out.std_error = std::sqrt(std::max(0.0, all.m2 / (n - 1.0)) / n);
  return out;
}

double basket_proxy_volatility(std::span<const AssetStats> stats, std::span<const double> weights) {
  if (stats.size() != weights.size()) throw Error(ErrorCode::DimensionMismatch, "stats/weights mismatch");
  CompensatedSum acc;
  for (std::size_t i = 0; i < stats.size(); ++i) acc += weights[i] * stats[i].sigma_annual;
  return acc.value();
}

}  // namespace qbasket
