#include "qbasket/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <new>
#include <string>
#include <utility>

#include "qbasket/classical.hpp"
#include "qbasket/distribution.hpp"
#include "qbasket/market_data.hpp"
#include "qbasket/numeric.hpp"

namespace qbasket {

namespace {

template <typename F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCode::QubitCapExceeded, "allocation failed", stage);
  }
}

void config_error(const std::string& message) { throw Error(ErrorCode::ConfigError, message); }

struct Encoded {
  AOperator A;
  RegisterLayout layout;
  double low = 0.0;
  double high = 0.0;
  double strike = 0.0;
  double classical_payoff = 0.0;  // undiscounted grid expectation of max(0, A - K)
};

Encoded encode_direct(const RunConfig& cfg, std::span<const AssetStats> stats, std::span<const double> weights) {
  const std::size_t d = stats.size();
  std::vector<AssetGrid> grids;
  grids.reserve(d);
  for (const auto& s : stats) {
    grids.push_back(discretize_lognormal(s.s0, s.mu_T, s.sigma_T, cfg.n_per_asset, cfg.ito_correction));
  }
  std::vector<int> widths(d, cfg.n_per_asset);
  const int nbq = cfg.nbq > 0 ? cfg.nbq : default_basket_qubits(widths);
  const PriceBounds bounds = basket_bounds(grids, weights);
  const RegisterLayout layout = RegisterLayout::direct(nbq);
  check_qubit_cap(layout.total_qubits(), cfg.qubit_cap);
  const BinnedBasketDistribution binned = bin_joint_grid(grids, weights, bounds, nbq);

  const double K = cfg.mode == PricingMode::ExpectedPrice ? bounds.low : cfg.strike_K;
  const double Km = map_strike(K, bounds.low, bounds.high, nbq, 1);
  const PayoffConfig pc = make_payoff_config(layout, Km, cfg.rotation, cfg.slope_c);
  AOperator A(DistributionLoader(layout, binned), PayoffRotation(layout, pc));
  return Encoded{std::move(A), layout, bounds.low, bounds.high, K, binned_expected_payoff(binned, K)};
}

Encoded encode_multi_register(const RunConfig& cfg, std::span<const AssetStats> stats,
                              std::span<const double> weights) {
  const std::size_t d = stats.size();
  for (double w : weights) {
    if (std::abs(w - weights[0]) > 1e-12) {
      throw Error(ErrorCode::ConfigError, "multi-register encoding needs equal weights");
    }
  }
  PriceBounds envelope{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::vector<LognormalParams> params;
  params.reserve(d);
  for (const auto& s : stats) {
    const PriceBounds b = asset_price_bounds(s.s0, s.mu_T, s.sigma_T);
    envelope.low = std::min(envelope.low, b.low);
    envelope.high = std::max(envelope.high, b.high);
    params.push_back(lognormal_params(s.s0, s.mu_T, s.sigma_T, cfg.ito_correction));
  }
  std::vector<AssetGrid> grids;
  grids.reserve(d);
  for (const auto& p : params) grids.push_back(discretize_lognormal(p, envelope, cfg.n_per_asset));

  const RegisterLayout layout = RegisterLayout::multi_register(std::vector<int>(d, cfg.n_per_asset));
  check_qubit_cap(layout.total_qubits(), cfg.qubit_cap);

  const double K = cfg.mode == PricingMode::ExpectedPrice ? envelope.low : cfg.strike_K;
  const double Km = map_strike(static_cast<double>(d) * K, envelope.low, envelope.high, cfg.n_per_asset,
                               static_cast<int>(d));
  const PayoffConfig pc = make_payoff_config(layout, Km, cfg.rotation, cfg.slope_c);

  CompensatedSum acc;
  for_each_joint_point(grids, weights, [&](double v, double p) { acc += p * std::max(0.0, v - K); });
  const double payoff = acc.value();
  AOperator A(DistributionLoader(layout, grids), PayoffRotation(layout, pc));
  return Encoded{std::move(A), layout, envelope.low, envelope.high, K, payoff};
}

}  // namespace

void validate_run_config(const RunConfig& cfg) {
  if (cfg.tickers.empty()) config_error("no tickers given");
  if (cfg.weights.size() != cfg.tickers.size()) {
    config_error(std::to_string(cfg.tickers.size()) + " tickers but " + std::to_string(cfg.weights.size()) +
                 " weights");
  }
  if (!(cfg.maturity_T > 0.0) || !std::isfinite(cfg.maturity_T)) config_error("maturity must be positive");
  if (cfg.mode == PricingMode::Payoff && !(cfg.strike_K >= 0.0)) config_error("strike must be non-negative");
  if (!std::isfinite(cfg.risk_free_r)) config_error("risk-free rate must be finite");
  if (cfg.trading_days < 1) config_error("trading days must be >= 1");
  if (cfg.n_per_asset < 1 || cfg.n_per_asset > 20) config_error("n_per_asset must be in [1, 20]");
  if (cfg.nbq < 0 || cfg.nbq > 30) config_error("nbq must be in [0, 30]");
  if (!(cfg.eps_target > 0.0 && cfg.eps_target < 0.5)) config_error("eps must be in (0, 0.5)");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) config_error("alpha must be in (0, 1)");
  if (cfg.shots < 1) config_error("shots must be >= 1");
  if (cfg.ancillas < 1 || cfg.ancillas > 20) config_error("ancillas must be in [1, 20]");
  if (!(cfg.slope_c > 0.0 && cfg.slope_c <= 1.0)) config_error("slope must be in (0, 1]");
  if (cfg.mc_paths < 2) config_error("mc paths must be >= 2");
  if (cfg.qubit_cap < 2 || cfg.qubit_cap > 30) config_error("qubit cap must be in [2, 30]");
}

bool SweepReport::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.ok; });
}

double percentage_deviation(double estimate, double realized) {
  if (!(realized != 0.0)) throw Error(ErrorCode::InvalidInput, "realized price is zero");
  return 100.0 * std::abs(estimate - realized) / std::abs(realized);
}

ReportRow run_pricing(const RunConfig& cfg) {
  validate_run_config(cfg);

  ReportRow row;
  row.tickers = cfg.tickers;
  row.n_per_asset = cfg.n_per_asset;
  row.estimator = cfg.estimator;
  row.encoding = cfg.encoding;
  row.seed = cfg.seed;

  std::vector<AssetSeries> series;
  std::vector<AssetStats> stats;
  staged("market_data", [&] {
    series = load_price_csv(cfg.data_path, cfg.tickers, cfg.weights);
    for (const auto& s : series) {
      stats.push_back(estimate_asset_stats(s, cfg.maturity_T, cfg.drift_shift, cfg.trading_days));
    }
    row.initial_basket_price = initial_basket_price(series, BasketDate::First);
    row.final_basket_price = initial_basket_price(series, BasketDate::Last);
  });

  Encoded enc = staged("distribution", [&] {
    return cfg.encoding == Encoding::Direct ? encode_direct(cfg, stats, cfg.weights)
                                            : encode_multi_register(cfg, stats, cfg.weights);
  });
  row.nbq = enc.layout.encoding() == Encoding::Direct ? enc.layout.domain_qubits() : enc.layout.sum_qubits();
  row.total_qubits = enc.layout.total_qubits();
  row.domain_low = enc.low;
  row.domain_high = enc.high;
  row.strike_used = enc.strike;

  const bool expected = cfg.mode == PricingMode::ExpectedPrice;
  const double discount = expected ? 1.0 : std::exp(-cfg.risk_free_r * cfg.maturity_T);

  staged("quantum_core", [&] {
    if (cfg.estimator == EstimatorKind::Canonical) {
      row.estimate = canonical_qae(enc.A, cfg.ancillas, cfg.qubit_cap);
    } else {
      IaeOptions opts;
      opts.eps_target = cfg.eps_target;
      opts.alpha = cfg.alpha;
      opts.shots = cfg.shots;
      opts.exact = cfg.exact;
      opts.seed = cfg.seed;
      opts.qubit_cap = cfg.qubit_cap;
      row.estimate = iterative_amplitude_estimation(enc.A, opts);
    }
    const double payoff = post_process_estimate(row.estimate, enc.A.payoff_config(), {enc.high, enc.strike});
    row.qae_price = expected ? payoff + enc.strike : discount * payoff;
    row.oracle_queries = row.estimate.oracle_queries;
    row.price_tolerance = cfg.eps_target * std::max(0.0, enc.high - enc.strike);
  });
  row.binned_price = expected ? enc.classical_payoff + enc.strike : discount * enc.classical_payoff;

  staged("classical_bench", [&] {
    MCConfig mc;
    mc.paths = cfg.mc_paths;
    mc.seed = cfg.seed;
    const double K = expected ? 0.0 : cfg.strike_K;
    const double r = expected ? 0.0 : cfg.risk_free_r;
    const MCResult res = monte_carlo_basket(stats, cfg.weights, K, r, cfg.maturity_T, mc, cfg.ito_correction);
    row.mc_price = res.estimate;
    row.mc_stderr = res.std_error;

    const double sigma = basket_proxy_volatility(stats, cfg.weights);
    row.bs_proxy_price = expected
                             ? black_scholes_call(row.initial_basket_price, 0.0, 0.0, sigma, cfg.maturity_T)
                             : black_scholes_call(row.initial_basket_price, cfg.strike_K, cfg.risk_free_r, sigma,
                                                  cfg.maturity_T);
    row.pct_deviation = percentage_deviation(row.qae_price, row.final_basket_price);
  });
  return row;
}

namespace {

ReportRow failed_row(const RunConfig& cfg, const Error& e) {
  ReportRow row;
  row.tickers = cfg.tickers;
  row.n_per_asset = cfg.n_per_asset;
  row.nbq = cfg.nbq;
  row.estimator = cfg.estimator;
  row.encoding = cfg.encoding;
  row.seed = cfg.seed;
  row.ok = false;
  row.error = e.what();
  row.stage = e.stage();
  row.error_code = e.code();
  return row;
}

}  // namespace

SweepReport sweep_uncertainty_qubits(const RunConfig& cfg, const std::vector<int>& n_range) {
  if (n_range.empty()) config_error("empty qubit range");
  SweepReport report;
  for (int n : n_range) {
    RunConfig c = cfg;
    c.n_per_asset = n;
    try {
      report.rows.push_back(run_pricing(c));
    } catch (const Error& e) {
      report.rows.push_back(failed_row(c, e));
    }
  }
  return report;
}

SweepReport sweep_asset_count(const std::vector<RunConfig>& cfgs, int n_fixed) {
  if (cfgs.empty()) config_error("no baskets given");
  for (std::size_t b = 1; b < cfgs.size(); ++b) {
    const auto& prev = cfgs[b - 1].tickers;
    const auto& cur = cfgs[b].tickers;
    if (cur.size() <= prev.size() || !std::equal(prev.begin(), prev.end(), cur.begin())) {
      config_error("basket " + std::to_string(b + 1) + " does not extend the previous one");
    }
  }
  SweepReport report;
  for (const auto& cfg : cfgs) {
    RunConfig c = cfg;
    c.n_per_asset = n_fixed;
    try {
      report.rows.push_back(run_pricing(c));
    } catch (const Error& e) {
      report.rows.push_back(failed_row(c, e));
    }
  }
  return report;
}

BenchRow run_classical_bench(const RunConfig& cfg) {
  validate_run_config(cfg);
  std::vector<AssetStats> stats;
  BenchRow row;
  double initial = 0.0;
  staged("market_data", [&] {
    const auto series = load_price_csv(cfg.data_path, cfg.tickers, cfg.weights);
    for (const auto& s : series) {
      stats.push_back(estimate_asset_stats(s, cfg.maturity_T, cfg.drift_shift, cfg.trading_days));
    }
    initial = initial_basket_price(series, BasketDate::First);
    row.final_basket_price = initial_basket_price(series, BasketDate::Last);
  });
  row.assets = stats.size();
  row.seed = cfg.seed;
  staged("classical_bench", [&] {
    const bool expected = cfg.mode == PricingMode::ExpectedPrice;
    MCConfig mc;
    mc.paths = cfg.mc_paths;
    mc.seed = cfg.seed;
    const auto start = std::chrono::steady_clock::now();
    const MCResult res = monte_carlo_basket(stats, cfg.weights, expected ? 0.0 : cfg.strike_K,
                                            expected ? 0.0 : cfg.risk_free_r, cfg.maturity_T, mc, cfg.ito_correction);
    row.mc_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.mc_price = res.estimate;
    row.mc_stderr = res.std_error;
    row.paths = res.paths;
    const double sigma = basket_proxy_volatility(stats, cfg.weights);
    row.bs_proxy_price = expected ? black_scholes_call(initial, 0.0, 0.0, sigma, cfg.maturity_T)
                                  : black_scholes_call(initial, cfg.strike_K, cfg.risk_free_r, sigma, cfg.maturity_T);
  });
  return row;
}

std::vector<BasketDefinition> default_nested_baskets() {
  const std::vector<std::string> all{"AAPL", "GOOG", "MSFT", "NVDA", "AMZN", "TSLA", "V", "JNJ", "XOM"};
  const std::vector<std::vector<double>> weights{
      {0.40, 0.40, 0.20},
      {0.35, 0.30, 0.20, 0.15},
      {0.30, 0.25, 0.20, 0.15, 0.10},
      {0.25, 0.20, 0.20, 0.15, 0.10, 0.10},
      {0.22, 0.18, 0.18, 0.15, 0.10, 0.10, 0.07},
      {0.20, 0.16, 0.16, 0.14, 0.10, 0.08, 0.08, 0.08},
      {0.18, 0.15, 0.15, 0.12, 0.10, 0.08, 0.08, 0.07, 0.07},
  };
  std::vector<BasketDefinition> out;
  for (const auto& w : weights) {
    out.push_back({std::vector<std::string>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(w.size())), w});
  }
  return out;
}

}  // namespace qbasket
