#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qbasket/error.hpp"
#include "qbasket/estimation.hpp"
#include "qbasket/operators.hpp"
#include "qbasket/statevector.hpp"

namespace qbasket {

enum class PricingMode {
  ExpectedPrice,  // strike pinned to the grid lower bound; reports E[A(T)]
  Payoff,         // call payoff max(0, A(T) - K), discounted at r
};

struct RunConfig {
  std::filesystem::path data_path;
  std::vector<std::string> tickers;
  std::vector<double> weights;
  double maturity_T = 0.5;
  double strike_K = 0.0;
  PricingMode mode = PricingMode::ExpectedPrice;
  double risk_free_r = 0.05;
  double drift_shift = 0.05;
  int trading_days = 252;
  int n_per_asset = 3;
  int nbq = 0;  // 0 picks max n_i + ceil(log2 d)
  EstimatorKind estimator = EstimatorKind::Iterative;
  double eps_target = 1e-3;
  double alpha = 0.05;
  std::uint64_t shots = 1024;
  bool exact = true;
  std::uint64_t seed = 42;
  Encoding encoding = Encoding::Direct;
  bool ito_correction = false;
  int ancillas = 8;  // canonical QAE only
  RotationMode rotation = RotationMode::ExactAmplitude;
  double slope_c = kDefaultSlope;
  std::uint64_t mc_paths = 100000;
  int qubit_cap = kDefaultQubitCap;
};

/// Throws ConfigError on values outside the preconditions of the stages.
void validate_run_config(const RunConfig& cfg);

struct ReportRow {
  std::vector<std::string> tickers;
  int n_per_asset = 0;
  int nbq = 0;
  EstimatorKind estimator = EstimatorKind::Iterative;
  Encoding encoding = Encoding::Direct;
  std::uint64_t seed = 0;

  bool ok = true;
  std::string error;
  std::string stage;
  std::optional<ErrorCode> error_code;

  double qae_price = 0.0;
  double mc_price = 0.0;
  double mc_stderr = 0.0;
  double bs_proxy_price = 0.0;
  double binned_price = 0.0;
  double final_basket_price = 0.0;
  double initial_basket_price = 0.0;
  double pct_deviation = 0.0;
  std::uint64_t oracle_queries = 0;

  double strike_used = 0.0;
  double domain_low = 0.0;
  double domain_high = 0.0;
  int total_qubits = 0;
  AmplitudeEstimate estimate;
  /// eps_target expressed in price units for this row.
  double price_tolerance = 0.0;
};

struct SweepReport {
  std::vector<ReportRow> rows;

  bool any_failed() const;
};

/// 100 |estimate - realized| / realized
double percentage_deviation(double estimate, double realized);

/// Full pipeline for one configuration. Errors are rethrown with the stage
/// that raised them.
ReportRow run_pricing(const RunConfig& cfg);

/// One row per n (in the given order); failed rows are recorded, not thrown.
SweepReport sweep_uncertainty_qubits(const RunConfig& cfg, const std::vector<int>& n_range);

/// One row per basket at a fixed n. Each basket must extend the previous one.
SweepReport sweep_asset_count(const std::vector<RunConfig>& cfgs, int n_fixed);

struct BenchRow {
  std::size_t assets = 0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  double mc_price = 0.0;
  double mc_stderr = 0.0;
  double bs_proxy_price = 0.0;
  double final_basket_price = 0.0;
  double mc_seconds = 0.0;
};

/// Monte Carlo and the Black-Scholes proxy only, priced as in run_pricing.
BenchRow run_classical_bench(const RunConfig& cfg);

std::string bench_to_csv(const BenchRow& row);
std::string bench_to_json(const BenchRow& row);

struct BasketDefinition {
  std::vector<std::string> tickers;
  std::vector<double> weights;
};

/// Nested 3..9 asset baskets over AAPL, GOOG, MSFT, NVDA, AMZN, TSLA, V, JNJ, XOM.
std::vector<BasketDefinition> default_nested_baskets();

// report.cpp
std::string estimator_name(EstimatorKind kind);
std::string encoding_name(Encoding encoding);
std::string mode_name(PricingMode mode);

/// CSV with header
/// assets,n_per_asset,nbq,estimator,qae_price,mc_price,mc_stderr,bs_proxy_price,
/// binned_price,final_basket_price,pct_deviation,oracle_queries,seed
std::string report_to_csv(const SweepReport& report);
std::string report_to_json(const SweepReport& report);

}  // namespace qbasket
