#include <benchmark/benchmark.h>

#include <vector>

#include "qbasket/classical.hpp"
#include "qbasket/distribution.hpp"
#include "qbasket/estimation.hpp"
#include "qbasket/operators.hpp"

using namespace qbasket;

namespace {

AOperator direct_operator(int nbq) {
  const auto grid = discretize_lognormal(100.0, 0.03, 0.2, nbq);
  BinnedBasketDistribution d{nbq, grid.values, grid.probs};
  const auto layout = RegisterLayout::direct(nbq);
  return AOperator(DistributionLoader(layout, d), PayoffRotation(layout, make_payoff_config(layout, 0.0)));
}

std::vector<AssetStats> basket_stats(int d) {
  std::vector<AssetStats> out(d);
  for (int i = 0; i < d; ++i) {
    out[i].s0 = 50.0 + 10.0 * i;
    out[i].mu_T = 0.02;
    out[i].sigma_T = 0.1 + 0.02 * i;
  }
  return out;
}

}  // namespace

static void BM_GroverStep(benchmark::State& state) {
  const auto A = direct_operator(static_cast<int>(state.range(0)));
  Statevector s = A.prepare();
  for (auto _ : state) {
    grover_step(s, A);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetComplexityN(std::int64_t{1} << state.range(0));
}
BENCHMARK(BM_GroverStep)->DenseRange(6, 18, 4)->Complexity();

static void BM_GroverStepMultiRegister(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto layout = RegisterLayout::multi_register(std::vector<int>(d, 3));
  std::vector<AssetGrid> grids;
  for (int i = 0; i < d; ++i) grids.push_back(discretize_lognormal(100.0, 0.0, 0.2, 3));
  AOperator A(DistributionLoader(layout, grids), PayoffRotation(layout, make_payoff_config(layout, 1.0)));
  Statevector s = A.prepare();
  for (auto _ : state) {
    grover_step(s, A);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
}
BENCHMARK(BM_GroverStepMultiRegister)->DenseRange(2, 4);

static void BM_IterativeAE(benchmark::State& state) {
  const auto A = direct_operator(8);
  IaeOptions o;
  o.eps_target = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterative_amplitude_estimation(A, o).a_hat);
}
BENCHMARK(BM_IterativeAE)->RangeMultiplier(10)->Range(10, 10000)->Unit(benchmark::kMillisecond);

static void BM_CanonicalQAE(benchmark::State& state) {
  const auto A = direct_operator(6);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_qae(A, static_cast<int>(state.range(0))).a_hat);
}
BENCHMARK(BM_CanonicalQAE)->DenseRange(4, 10, 3)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const auto st = basket_stats(5);
  const std::vector<double> w(5, 0.2);
  MCConfig cfg;
  cfg.paths = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_basket(st, w, 60.0, 0.02, 0.5, cfg).estimate);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

static void BM_JointBinning(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::vector<AssetGrid> grids;
  for (int i = 0; i < d; ++i) grids.push_back(discretize_lognormal(50.0 + i, 0.01, 0.2, 3));
  const std::vector<double> w(d, 1.0 / d);
  const auto bounds = basket_bounds(grids, w);
  std::vector<int> widths(d, 3);
  const int nbq = default_basket_qubits(widths);
  for (auto _ : state) benchmark::DoNotOptimize(bin_joint_grid(grids, w, bounds, nbq).probs.data());
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (3 * d)));
}
BENCHMARK(BM_JointBinning)->DenseRange(3, 7, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
