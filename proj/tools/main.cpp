// qbasket: price a weighted basket with simulated amplitude estimation and
// compare against binned summation, Monte Carlo and a Black-Scholes proxy.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qbasket/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitPartial = 4;

struct CliOptions {
  std::string data;
  std::vector<std::string> tickers{"AAPL", "GOOG", "MSFT"};
  std::vector<double> weights{0.4, 0.4, 0.2};
  std::string mode = "expected-price";
  std::string estimator = "iae";
  std::string encoding = "direct";
  std::string rotation = "exact";
  std::string format = "csv";
  std::string out;
  std::string n_range = "1-5";
  std::vector<std::string> baskets;
  int n_fixed = 3;
  bool exact_flag = false;
  qbasket::RunConfig run;
};

bool is_data_error(qbasket::ErrorCode code) {
  using qbasket::ErrorCode;
  switch (code) {
    case ErrorCode::MissingTicker:
    case ErrorCode::EmptyIntersection:
    case ErrorCode::MalformedRow:
    case ErrorCode::TooShort:
    case ErrorCode::FileNotFound:
    case ErrorCode::DegenerateVolatility:
      return true;
    default:
      return false;
  }
}

std::vector<int> parse_n_range(const std::string& text) {
  std::vector<int> out;
  try {
    const auto dash = text.find('-');
    if (dash != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dash));
      const int hi = std::stoi(text.substr(dash + 1));
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      std::size_t pos = 0;
      while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        out.push_back(std::stoi(text.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
  } catch (const std::exception&) {
    out.clear();
  }
  if (out.empty()) throw qbasket::Error(qbasket::ErrorCode::ConfigError, "bad --n-range '" + text + "'");
  return out;
}

// "AAPL:0.4,GOOG:0.4,MSFT:0.2"
qbasket::BasketDefinition parse_basket(const std::string& text) {
  qbasket::BasketDefinition b;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw qbasket::Error(qbasket::ErrorCode::ConfigError, "basket entry '" + item + "' is not TICKER:WEIGHT");
    }
    b.tickers.push_back(item.substr(0, colon));
    try {
      std::size_t used = 0;
      b.weights.push_back(std::stod(item.substr(colon + 1), &used));
      if (used != item.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw qbasket::Error(qbasket::ErrorCode::ConfigError, "bad weight in '" + item + "'");
    }
    pos = comma + 1;
  }
  if (b.tickers.empty()) throw qbasket::Error(qbasket::ErrorCode::ConfigError, "empty basket");
  return b;
}

qbasket::RunConfig resolve(const CliOptions& o, bool shots_given) {
  using qbasket::Error;
  using qbasket::ErrorCode;
  qbasket::RunConfig cfg = o.run;
  cfg.data_path = o.data;
  cfg.tickers = o.tickers;
  cfg.weights = o.weights;
  if (o.data.empty()) throw Error(ErrorCode::ConfigError, "--data is required");
  if (o.mode == "expected-price") {
    cfg.mode = qbasket::PricingMode::ExpectedPrice;
  } else if (o.mode == "payoff") {
    cfg.mode = qbasket::PricingMode::Payoff;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown mode '" + o.mode + "'");
  }
  if (o.estimator == "iae") {
    cfg.estimator = qbasket::EstimatorKind::Iterative;
  } else if (o.estimator == "canonical") {
    cfg.estimator = qbasket::EstimatorKind::Canonical;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown estimator '" + o.estimator + "'");
  }
  if (o.encoding == "direct") {
    cfg.encoding = qbasket::Encoding::Direct;
  } else if (o.encoding == "multi-register") {
    cfg.encoding = qbasket::Encoding::MultiRegister;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown encoding '" + o.encoding + "'");
  }
  if (o.rotation == "exact") {
    cfg.rotation = qbasket::RotationMode::ExactAmplitude;
  } else if (o.rotation == "small-angle") {
    cfg.rotation = qbasket::RotationMode::SmallAngle;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown rotation '" + o.rotation + "'");
  }
  if (o.format != "csv" && o.format != "json") throw Error(ErrorCode::ConfigError, "format must be csv or json");
  cfg.exact = o.exact_flag || !shots_given;
  return cfg;
}

int emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "qbasket: cannot write %s\n", out.c_str());
    return kExitConfig;
  }
  f << text;
  return 0;
}

void add_run_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--data", o.data, "price CSV (date,ticker,adj_close)");
  cmd->add_option("--tickers", o.tickers, "comma-separated tickers")->delimiter(',');
  cmd->add_option("--weights", o.weights, "comma-separated weights")->delimiter(',');
  cmd->add_option("--maturity", o.run.maturity_T, "maturity in years");
  cmd->add_option("--strike", o.run.strike_K, "strike (payoff mode)");
  cmd->add_option("--mode", o.mode, "expected-price|payoff");
  cmd->add_option("--r", o.run.risk_free_r, "risk-free rate (payoff mode)");
  cmd->add_option("--drift-shift", o.run.drift_shift, "added to the annualized drift");
  cmd->add_option("--n-per-asset", o.run.n_per_asset, "qubits per asset grid");
  cmd->add_option("--nbq", o.run.nbq, "basket register qubits (0 = auto)");
  cmd->add_option("--estimator", o.estimator, "iae|canonical");
  cmd->add_option("--eps", o.run.eps_target, "IAE target half-width");
  cmd->add_option("--alpha", o.run.alpha, "IAE confidence level");
  auto* shots = cmd->add_option("--shots", o.run.shots, "sampled shots per IAE round");
  auto* exact = cmd->add_flag("--exact", o.exact_flag, "exact probabilities instead of shots");
  shots->excludes(exact);
  cmd->add_option("--ancillas", o.run.ancillas, "phase qubits for canonical QAE");
  cmd->add_option("--seed", o.run.seed, "RNG seed");
  cmd->add_option("--encoding", o.encoding, "direct|multi-register");
  cmd->add_option("--rotation", o.rotation, "exact|small-angle");
  cmd->add_option("--slope", o.run.slope_c, "small-angle slope c");
  cmd->add_flag("--ito", o.run.ito_correction, "subtract sigma^2/2 from the log drift");
  cmd->add_option("--mc-paths", o.run.mc_paths, "Monte Carlo paths");
  cmd->add_option("--qubit-cap", o.run.qubit_cap, "statevector qubit limit");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "csv|json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Basket option pricing with simulated amplitude estimation"};
  app.set_config("--config", "", "flat key = value file; flags override it");
  app.require_subcommand(1);

  CliOptions o;
  auto* price = app.add_subcommand("price", "single pricing run");
  auto* sweep_q = app.add_subcommand("sweep-qubits", "sweep qubits per asset");
  auto* sweep_a = app.add_subcommand("sweep-assets", "sweep nested baskets");
  auto* bench = app.add_subcommand("bench", "Monte Carlo and Black-Scholes proxy only");
  add_run_options(&app, o);
  app.add_option("--n-range", o.n_range, "sweep-qubits: e.g. 1-5 or 1,2,4");
  app.add_option("--basket", o.baskets, "sweep-assets: TICKER:W,...; repeat for each basket");
  app.add_option("--n", o.n_fixed, "sweep-assets: qubits per asset");
  for (auto* cmd : {price, sweep_q, sweep_a, bench}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  CLI::App* active = app.get_subcommands().front();
  const bool shots_given = app.count("--shots") > 0;
  const bool json = o.format == "json";

  try {
    const qbasket::RunConfig cfg = resolve(o, shots_given);
    if (active == price) {
      qbasket::SweepReport report;
      report.rows.push_back(qbasket::run_pricing(cfg));
      return emit(json ? qbasket::report_to_json(report) : qbasket::report_to_csv(report), o.out);
    }
    if (active == bench) {
      const auto row = qbasket::run_classical_bench(cfg);
      return emit(json ? qbasket::bench_to_json(row) : qbasket::bench_to_csv(row), o.out);
    }
    qbasket::SweepReport report;
    if (active == sweep_q) {
      report = qbasket::sweep_uncertainty_qubits(cfg, parse_n_range(o.n_range));
    } else {
      std::vector<qbasket::BasketDefinition> defs;
      if (o.baskets.empty()) {
        defs = qbasket::default_nested_baskets();
      } else {
        for (const auto& b : o.baskets) defs.push_back(parse_basket(b));
      }
      std::vector<qbasket::RunConfig> cfgs;
      for (const auto& d : defs) {
        qbasket::RunConfig c = cfg;
        c.tickers = d.tickers;
        c.weights = d.weights;
        cfgs.push_back(std::move(c));
      }
      report = qbasket::sweep_asset_count(cfgs, o.n_fixed);
    }
    const int rc = emit(json ? qbasket::report_to_json(report) : qbasket::report_to_csv(report), o.out);
    if (rc != 0) return rc;
    for (const auto& row : report.rows) {
      if (!row.ok) std::fprintf(stderr, "qbasket: %s\n", row.error.c_str());
    }
    return report.any_failed() ? kExitPartial : 0;
  } catch (const qbasket::Error& e) {
    std::fprintf(stderr, "qbasket: %s\n", e.what());
    return is_data_error(e.code()) ? kExitData : kExitConfig;
  }
}
