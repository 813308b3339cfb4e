#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qbasket/classical.hpp"
#include "qbasket/estimation.hpp"
#include "qbasket/experiments.hpp"
#include "qbasket/market_data.hpp"
#include "qbasket/operators.hpp"

using namespace qbasket;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

RunConfig fixture_config(std::vector<std::string> tickers, std::vector<double> weights) {
  RunConfig cfg;
  cfg.data_path = QBASKET_FIXTURE_CSV;
  cfg.tickers = std::move(tickers);
  cfg.weights = std::move(weights);
  return cfg;
}

// payoff written out from its definition, independent of the library helpers
double oracle_g(double x, double km, double dmax, RotationMode mode, double c) {
  const double span = dmax - km;
  const double f = span > 0.0 ? std::clamp((x - km) / span, 0.0, 1.0) : 0.0;
  if (mode == RotationMode::ExactAmplitude) return f;
  const double s = std::sin(c * (f - 0.5) + std::numbers::pi / 4.0);
  return s * s;
}

void oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::vector<int>> multi{{1}, {2}, {1, 1}, {1, 1, 1}};
  int cases = 0;
  double worst = 0.0;
  for (; cases < 400; ++cases) {
    const auto mode = u(rng) < 0.5 ? RotationMode::ExactAmplitude : RotationMode::SmallAngle;
    const double c = 0.05 + 0.95 * u(rng);
    double a_true = 0.0, expect = 0.0;
    if (cases % 2 == 0) {
      const int nbq = 1 + cases / 2 % 5;
      const auto layout = RegisterLayout::direct(nbq);
      const std::size_t n = std::size_t{1} << nbq;
      const auto probs = fixture::random_probs(rng, n);
      const double dmax = static_cast<double>(n - 1);
      const double km = -0.5 * dmax + 1.7 * dmax * u(rng);
      BinnedBasketDistribution d{nbq, uniform_grid({0.0, dmax}, n), probs};
      const AOperator A(DistributionLoader(layout, d), PayoffRotation(layout, make_payoff_config(layout, km, mode, c)));
      a_true = A.true_amplitude();
      for (std::size_t x = 0; x < n; ++x) expect += probs[x] * oracle_g(static_cast<double>(x), km, dmax, mode, c);
    } else {
      const auto& qubits = multi[static_cast<std::size_t>(cases / 2) % multi.size()];
      const auto layout = RegisterLayout::multi_register(qubits);
      std::vector<AssetGrid> grids;
      double dmax = 0.0;
      for (int q : qubits) {
        grids.push_back(fixture::grid_from(fixture::random_probs(rng, std::size_t{1} << q), {10.0, 20.0}));
        dmax += static_cast<double>((1 << q) - 1);
      }
      const double km = -0.5 * dmax + 1.7 * dmax * u(rng);
      const AOperator A(DistributionLoader(layout, grids),
                        PayoffRotation(layout, make_payoff_config(layout, km, mode, c)));
      a_true = A.true_amplitude();
      // enumerate the joint index space directly
      std::function<void(std::size_t, double, double)> walk = [&](std::size_t i, double sum, double p) {
        if (i == grids.size()) {
          expect += p * oracle_g(sum, km, dmax, mode, c);
          return;
        }
        for (std::size_t j = 0; j < grids[i].probs.size(); ++j) {
          walk(i + 1, sum + static_cast<double>(j), p * grids[i].probs[j]);
        }
      };
      walk(0, 0.0, 1.0);
    }
    worst = std::max(worst, std::abs(a_true - expect));
  }
  const double t = seconds_since(t0);
  report("oracle_equivalence", worst <= 1e-12 && t < 10.0,
         fmt("%d cases, max |a_true - sum pi g| = %.2e (tol 1e-12), %.2fs (limit 10s)", cases, worst, t));
}

void qae_vs_binned() {
  auto cfg = fixture_config({"AAPL", "GOOG"}, {0.5, 0.5});
  cfg.n_per_asset = 2;
  cfg.eps_target = 1e-6;
  cfg.exact = true;
  cfg.mc_paths = 1000;
  const auto t0 = std::chrono::steady_clock::now();
  const auto row = run_pricing(cfg);
  const double t = seconds_since(t0);
  const double diff = std::abs(row.qae_price - row.binned_price);
  report("qae_vs_binned", row.ok && diff <= 1e-4 && t < 1.0,
         fmt("qae %.8f binned %.8f |diff| = %.2e (tol 1e-4), %.3fs (limit 1s)", row.qae_price, row.binned_price, diff,
             t));
}

void grover_law() {
  double worst = 0.0;
  for (double a : {0.1, 0.25, 0.5}) {
    const auto A = fixture::bernoulli_operator(a);
    const double theta = std::asin(std::sqrt(a));
    for (int k = 0; k <= 5; ++k) {
      auto state = A.prepare();
      grover_operator_apply(state, A, k);
      const double p = state.probability_one(A.layout().objective_qubit());
      const double s = std::sin((2 * k + 1) * theta);
      worst = std::max(worst, std::abs(p - s * s));
    }
  }
  report("grover_law", worst <= 1e-10, fmt("max |P - sin^2((2k+1)theta)| = %.2e (tol 1e-10)", worst));
}

void speedup_slopes() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> eps{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

  const auto A = fixture::bernoulli_operator(0.3);
  std::vector<double> queries;
  for (double e : eps) {
    IaeOptions opt;
    opt.eps_target = e;
    opt.alpha = 0.05;
    opt.exact = true;
    queries.push_back(static_cast<double>(std::max<std::uint64_t>(1, iterative_amplitude_estimation(A, opt).oracle_queries)));
  }
  const double q_slope = slope(eps, queries);

  // Monte Carlo paths needed for a relative standard error of eps on the
  // at-the-money 3-asset basket call
  const std::vector<std::string> tickers{"AAPL", "GOOG", "MSFT"};
  const std::vector<double> w{0.4, 0.4, 0.2};
  const auto series = load_price_csv(QBASKET_FIXTURE_CSV, tickers, w);
  std::vector<AssetStats> stats;
  for (const auto& s : series) stats.push_back(estimate_asset_stats(s, 0.5));
  const double strike = initial_basket_price(series, BasketDate::Last);
  std::vector<double> samples;
  for (double e : eps) {
    double m = 16.0;
    for (;;) {
      MCConfig mc;
      mc.paths = static_cast<std::uint64_t>(m);
      const auto res = monte_carlo_basket(stats, w, strike, 0.05, 0.5, mc);
      if (res.estimate > 0.0 && res.std_error / res.estimate <= e) break;
      m = std::ceil(m * 1.1);
    }
    samples.push_back(m);
  }
  const double m_slope = slope(eps, samples);
  const double t = seconds_since(t0);

  std::string q_list, m_list;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    q_list += fmt("%s%.0f", i ? "," : "", queries[i]);
    m_list += fmt("%s%.0f", i ? "," : "", samples[i]);
  }
  report("speedup_iae_slope", q_slope >= -1.3 && q_slope <= -0.8 && t < 60.0,
         fmt("slope %.3f in [-1.3,-0.8], queries %s", q_slope, q_list.c_str()));
  report("speedup_mc_slope", m_slope >= -2.3 && m_slope <= -1.7 && t < 60.0,
         fmt("slope %.3f in [-2.3,-1.7], paths %s, %.1fs (limit 60s)", m_slope, m_list.c_str(), t));
}

void black_scholes() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> s0(10, 400), k(0.6, 1.4), r(-0.01, 0.1), sig(0.05, 0.8), T(0.05, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double S = s0(rng), K = S * k(rng), R = r(rng), V = sig(rng), TT = T(rng);
    worst = std::max(worst, std::abs(black_scholes_call(S, K, R, V, TT) - oracle::bs_call_quadrature(S, K, R, V, TT)));
  }
  report("black_scholes", worst <= 1e-9, fmt("20 tuples, max |bs - quadrature| = %.2e (tol 1e-9)", worst));
}

void monte_carlo() {
  auto cfg = fixture_config({"AAPL", "GOOG", "MSFT"}, {0.4, 0.4, 0.2});
  cfg.n_per_asset = 8;
  cfg.mc_paths = 100000;
  cfg.seed = 42;
  const auto row = run_pricing(cfg);
  const double z42 = (row.mc_price - row.binned_price) / row.mc_stderr;

  const std::vector<std::string> tickers{"AAPL", "GOOG", "MSFT"};
  const std::vector<double> w{0.4, 0.4, 0.2};
  const auto series = load_price_csv(QBASKET_FIXTURE_CSV, tickers, w);
  std::vector<AssetStats> stats;
  for (const auto& s : series) stats.push_back(estimate_asset_stats(s, cfg.maturity_T));
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    MCConfig mc;
    mc.paths = 100000;
    mc.seed = seed;
    const auto res = monte_carlo_basket(stats, w, 0.0, 0.0, cfg.maturity_T, mc);
    if (std::abs(res.estimate - row.binned_price) <= 3.0 * res.std_error) ++inside;
  }
  report("monte_carlo_seed42", row.ok && std::abs(z42) <= 3.0,
         fmt("mc %.4f binned(n=8) %.4f stderr %.4f z = %.2f (limit 3)", row.mc_price, row.binned_price,
             row.mc_stderr, z42));
  report("monte_carlo_50_seeds", inside >= 47, fmt("%d/50 within 3 stderr (need 47)", inside));
}

void iae_coverage() {
  const auto A = fixture::bernoulli_operator(0.3);
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    IaeOptions opt;
    opt.exact = false;
    opt.shots = 1024;
    opt.alpha = 0.05;
    opt.seed = seed;
    const auto est = iterative_amplitude_estimation(A, opt);
    if (est.ci_low <= 0.3 && 0.3 <= est.ci_high) ++covered;
  }
  report("iae_coverage", covered >= 186, fmt("%d/200 = %.1f%% cover a_true (need 93%%)", covered, covered / 2.0));
}

void trends() {
  const auto baskets = default_nested_baskets();
  auto deviations = [&](const BasketDefinition& b, std::vector<int> ns) {
    const auto rep = sweep_uncertainty_qubits(fixture_config(b.tickers, b.weights), ns);
    std::vector<double> out;
    for (const auto& r : rep.rows) out.push_back(r.ok ? r.pct_deviation : NAN);
    return out;
  };
  const auto three = deviations(baskets[0], {1, 3, 4, 5});
  const auto four = deviations(baskets[1], {1, 3});
  const auto five = deviations(baskets[2], {1});
  report("trend_a_3_assets", three[1] < three[0], fmt("n=3 %.4f%% < n=1 %.4f%%", three[1], three[0]));
  report("trend_a_4_assets", four[1] < four[0], fmt("n=3 %.4f%% < n=1 %.4f%%", four[1], four[0]));
  report("trend_b_asset_count", five[0] > three[0], fmt("5 assets %.4f%% > 3 assets %.4f%% at n=1", five[0], three[0]));
  const double delta = std::abs(three[3] - three[2]);
  report("trend_c_plateau", delta < 0.5, fmt("|dev(n=5) - dev(n=4)| = %.4f points (limit 0.5)", delta));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism() {
#ifdef QBASKET_CLI
  const auto dir = std::filesystem::temp_directory_path() / "qbasket_acceptance";
  std::filesystem::create_directories(dir);
  std::string outputs[2];
  int status = 0;
  for (int i = 0; i < 2; ++i) {
    const auto out = dir / ("sweep" + std::to_string(i) + ".csv");
    std::filesystem::remove(out);
    const std::string cmd = std::string("\"") + QBASKET_CLI + "\" sweep-qubits --data \"" + QBASKET_FIXTURE_CSV +
                            "\" --n-range 1-4 --estimator iae --shots 512 --seed 7 --out \"" + out.string() + "\"";
    status |= std::system(cmd.c_str());
    outputs[i] = slurp(out);
  }
  const bool same = status == 0 && !outputs[0].empty() && outputs[0] == outputs[1];
  report("determinism", same, fmt("two sweep-qubits runs, %zu bytes each, identical: %s", outputs[0].size(),
                                  same ? "yes" : "no"));
#else
  report("determinism", false, "CLI not built");
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)()>> checks{
      {"oracle_equivalence", oracle_equivalence},
      {"qae_vs_binned", qae_vs_binned},
      {"grover_law", grover_law},
      {"speedup", speedup_slopes},
      {"black_scholes", black_scholes},
      {"monte_carlo", monte_carlo},
      {"iae_coverage", iae_coverage},
      {"trends", trends},
      {"determinism", determinism},
  };
  for (const auto& [name, fn] : checks) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(name, false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
