#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qbasket/distribution.hpp"
#include "qbasket/operators.hpp"

namespace fixture {

// A on two qubits with P(objective = 1) = a exactly.
inline qbasket::AOperator bernoulli_operator(double a) {
  using namespace qbasket;
  const auto layout = RegisterLayout::direct(1);
  BinnedBasketDistribution d{1, {0.0, 1.0}, {1.0 - a, a}};
  return AOperator(DistributionLoader(layout, d), PayoffRotation(layout, make_payoff_config(layout, 0.0)));
}

inline std::vector<double> random_probs(std::mt19937_64& rng, std::size_t n, bool allow_zero = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = u(rng);
    if (allow_zero && u(rng) < 0.15) x = 0.0;
    total += x;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : p) x /= total;
  return p;
}

inline qbasket::AssetGrid grid_from(std::vector<double> probs, qbasket::PriceBounds b) {
  qbasket::AssetGrid g;
  g.num_qubits = static_cast<int>(std::log2(static_cast<double>(probs.size())));
  g.bounds = b;
  g.values = qbasket::uniform_grid(b, probs.size());
  g.probs = std::move(probs);
  return g;
}

}  // namespace fixture
