#include <cstdio>
#include "json.hpp"
#include <string>

#include "qbasket/experiments.hpp"

namespace qbasket {

namespace {

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

std::string estimator_name(EstimatorKind kind) { return kind == EstimatorKind::Canonical ? "canonical" : "iae"; }

std::string encoding_name(Encoding encoding) {
  return encoding == Encoding::MultiRegister ? "multi-register" : "direct";
}

std::string mode_name(PricingMode mode) { return mode == PricingMode::Payoff ? "payoff" : "expected-price"; }

std::string report_to_csv(const SweepReport& report) {
  std::string out =
      "assets,n_per_asset,nbq,estimator,qae_price,mc_price,mc_stderr,bs_proxy_price,binned_price,"
      "final_basket_price,pct_deviation,oracle_queries,seed\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.tickers.size()) + ',' + std::to_string(r.n_per_asset) + ',';
    out += (r.nbq > 0 ? std::to_string(r.nbq) : std::string()) + ',' + estimator_name(r.estimator) + ',';
    if (r.ok) {
      out += fixed(r.qae_price, 6) + ',' + fixed(r.mc_price, 6) + ',' + fixed(r.mc_stderr, 6) + ',' +
             fixed(r.bs_proxy_price, 6) + ',' + fixed(r.binned_price, 6) + ',' + fixed(r.final_basket_price, 6) +
             ',' + fixed(r.pct_deviation, 4) + ',' + std::to_string(r.oracle_queries) + ',';
    } else {
      out += ",,,,,,,,";
    }
    out += std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string report_to_json(const SweepReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["assets"] = r.tickers.size();
    j["tickers"] = r.tickers;
    j["n_per_asset"] = r.n_per_asset;
    j["nbq"] = r.nbq;
    j["estimator"] = estimator_name(r.estimator);
    j["encoding"] = encoding_name(r.encoding);
    j["seed"] = r.seed;
    j["ok"] = r.ok;
    if (!r.ok) {
      j["stage"] = r.stage;
      j["error"] = r.error;
    } else {
      j["qae_price"] = r.qae_price;
      j["mc_price"] = r.mc_price;
      j["mc_stderr"] = r.mc_stderr;
      j["bs_proxy_price"] = r.bs_proxy_price;
      j["binned_price"] = r.binned_price;
      j["initial_basket_price"] = r.initial_basket_price;
      j["final_basket_price"] = r.final_basket_price;
      j["pct_deviation"] = r.pct_deviation;
      j["oracle_queries"] = r.oracle_queries;
      j["a_hat"] = r.estimate.a_hat;
      j["ci"] = {r.estimate.ci_low, r.estimate.ci_high};
      j["strike_used"] = r.strike_used;
      j["domain"] = {r.domain_low, r.domain_high};
      j["total_qubits"] = r.total_qubits;
    }
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string bench_to_csv(const BenchRow& row) {
  return "assets,paths,seed,mc_price,mc_stderr,bs_proxy_price,final_basket_price,mc_seconds\n" +
         std::to_string(row.assets) + ',' + std::to_string(row.paths) + ',' + std::to_string(row.seed) + ',' +
         fixed(row.mc_price, 6) + ',' + fixed(row.mc_stderr, 6) + ',' + fixed(row.bs_proxy_price, 6) + ',' +
         fixed(row.final_basket_price, 6) + ',' + fixed(row.mc_seconds, 4) + '\n';
}

std::string bench_to_json(const BenchRow& row) {
  nlohmann::ordered_json j;
  j["assets"] = row.assets;
  j["paths"] = row.paths;
  j["seed"] = row.seed;
  j["mc_price"] = row.mc_price;
  j["mc_stderr"] = row.mc_stderr;
  j["bs_proxy_price"] = row.bs_proxy_price;
  j["final_basket_price"] = row.final_basket_price;
  j["mc_seconds"] = row.mc_seconds;
  return j.dump(2) + "\n";
}

}  // namespace qbasket
