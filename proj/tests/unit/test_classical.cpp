#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qbasket/classical.hpp"
#include "qbasket/distribution.hpp"
#include "qbasket/error.hpp"

using namespace qbasket;

namespace {

AssetStats stats(double s0, double mu_T, double sigma_T) {
  AssetStats s;
  s.s0 = s0;
  s.mu_T = mu_T;
  s.sigma_T = sigma_T;
  s.sigma_annual = sigma_T;
  return s;
}

}  // namespace

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.959963985) - 0.975) <= 1e-9);
  for (double x : {0.1, 0.7, 1.5, 3.0, 8.0}) CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) <= 1e-14);
  CHECK(normal_cdf(-40.0) >= 0.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-9));
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
}

TEST_CASE("Black-Scholes values and limits") {
  CHECK(std::abs(black_scholes_call(100, 100, 0.05, 0.2, 1.0) - 10.450584) <= 1e-6);
  CHECK(black_scholes_call(100, 0, 0.05, 0.2, 1.0) == 100.0);
  CHECK(black_scholes_call(100, 90, 0.0, 0.0, 1.0) == doctest::Approx(10.0));
  CHECK(black_scholes_call(100, 120, 0.0, 0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(black_scholes_call(0, 100, 0.05, 0.2, 1.0), Error);
  CHECK_THROWS_AS(black_scholes_call(100, 100, 0.05, 0.2, 0.0), Error);
}

TEST_CASE("Black-Scholes against quadrature and the call lower bound") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> s0(20, 300), k(0.5, 1.5), r(-0.01, 0.08), sig(0.05, 0.6), T(0.1, 3.0);
  for (int t = 0; t < 10; ++t) {
    const double S = s0(rng), K = S * k(rng), R = r(rng), V = sig(rng), TT = T(rng);
    const double c = black_scholes_call(S, K, R, V, TT);
    CHECK(std::abs(c - oracle::bs_call_quadrature(S, K, R, V, TT)) <= 1e-9);
    CHECK(c - (S - K * std::exp(-R * TT)) >= -1e-12);
  }
}

TEST_CASE("Monte Carlo with zero volatility is deterministic") {
  const std::vector<AssetStats> st{stats(100, 0.05, 0.0), stats(50, -0.02, 0.0)};
  const std::vector<double> w{0.6, 0.4};
  MCConfig cfg;
  cfg.paths = 1000;
  const auto res = monte_carlo_basket(st, w, 70.0, 0.03, 0.5, cfg);
  const double expect = std::exp(-0.015) * (0.6 * 100 * std::exp(0.05) + 0.4 * 50 * std::exp(-0.02) - 70.0);
  CHECK(std::abs(res.estimate - expect) <= 1e-12);
  CHECK(res.std_error == 0.0);
}

TEST_CASE("Monte Carlo results do not depend on the worker count") {
  const std::vector<AssetStats> st{stats(100, 0.05, 0.2), stats(50, 0.0, 0.3), stats(20, 0.01, 0.1)};
  const std::vector<double> w{0.5, 0.3, 0.2};
  MCConfig cfg;
  cfg.paths = 50000;
  const auto one = monte_carlo_basket(st, w, 60.0, 0.02, 1.0, cfg);
  cfg.workers = 4;
  const auto four = monte_carlo_basket(st, w, 60.0, 0.02, 1.0, cfg);
  CHECK(one.estimate == four.estimate);
  CHECK(one.std_error == four.std_error);
  cfg.seed = 43;
  CHECK(monte_carlo_basket(st, w, 60.0, 0.02, 1.0, cfg).estimate != one.estimate);
}

TEST_CASE("single-asset Monte Carlo agrees with Black-Scholes") {
  // risk-neutral drift: mu_T = rT with the Ito correction
  const double r = 0.03, T = 1.0, sigma = 0.25;
  const std::vector<AssetStats> st{stats(100, r * T, sigma * std::sqrt(T))};
  const std::vector<double> w{1.0};
  MCConfig cfg;
  cfg.paths = 200000;
  const auto res = monte_carlo_basket(st, w, 105.0, r, T, cfg, true);
  CHECK(std::abs(res.estimate - black_scholes_call(100, 105, r, sigma, T)) <= 4.0 * res.std_error);
}

TEST_CASE("stderr halves when the path count quadruples") {
  const std::vector<AssetStats> st{stats(100, 0.05, 0.2), stats(50, 0.0, 0.3)};
  const std::vector<double> w{0.5, 0.5};
  MCConfig cfg;
  for (std::uint64_t m : {10000u, 40000u}) {
    cfg.paths = m;
    const double a = monte_carlo_basket(st, w, 70.0, 0.0, 1.0, cfg).std_error;
    cfg.paths = 4 * m;
    const double b = monte_carlo_basket(st, w, 70.0, 0.0, 1.0, cfg).std_error;
    CHECK(a / b == doctest::Approx(2.0).epsilon(0.2));
  }
}

TEST_CASE("antithetic sampling keeps the mean and reduces the error") {
  const std::vector<AssetStats> st{stats(100, 0.05, 0.2)};
  const std::vector<double> w{1.0};
  MCConfig cfg;
  cfg.paths = 100000;
  const auto plain = monte_carlo_basket(st, w, 0.0, 0.0, 1.0, cfg);
  cfg.antithetic = true;
  const auto anti = monte_carlo_basket(st, w, 0.0, 0.0, 1.0, cfg);
  CHECK(anti.paths == 100000);
  CHECK(anti.std_error < plain.std_error);
  CHECK(std::abs(anti.estimate - 100 * std::exp(0.05 + 0.02)) <= 4 * anti.std_error);
}

TEST_CASE("Monte Carlo argument checks") {
  const std::vector<AssetStats> st{stats(100, 0.0, 0.2)};
  const std::vector<double> w2{0.5, 0.5};
  MCConfig cfg;
  CHECK_THROWS_AS(monte_carlo_basket(st, w2, 0.0, 0.0, 1.0, cfg), Error);
  cfg.paths = 0;
  const std::vector<double> w1{1.0};
  CHECK_THROWS_AS(monte_carlo_basket(st, w1, 0.0, 0.0, 1.0, cfg), Error);
}

TEST_CASE("counter uniforms stay inside (0, 1)") {
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = counter_uniform(42, i);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("basket proxy volatility") {
  std::vector<AssetStats> st{stats(1, 0, 0.2), stats(1, 0, 0.4)};
  st[0].sigma_annual = 0.2;
  st[1].sigma_annual = 0.4;
  const std::vector<double> w{0.25, 0.75};
  CHECK(basket_proxy_volatility(st, w) == doctest::Approx(0.35));
}
