#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbasket/distribution.hpp"
#include "qbasket/statevector.hpp"

namespace qbasket {

/// Loads sqrt-probability amplitudes into each asset register (or the single
/// basket register). Per register it applies U = 2 v v^T / |v|^2 - I with
/// v = e_0 + psi, a real reflection that sends |0> to |psi> and is its own
/// inverse.
class DistributionLoader {
 public:
  DistributionLoader(const RegisterLayout& layout, std::span<const AssetGrid> grids);
  DistributionLoader(const RegisterLayout& layout, const BinnedBasketDistribution& binned);

  void apply(Statevector& state) const;
  void apply_inverse(Statevector& state) const { apply(state); }

  /// sqrt(p) for register i.
  std::span<const double> register_amplitudes(int i) const { return targets_.at(static_cast<std::size_t>(i)); }
  const RegisterLayout& layout() const noexcept { return layout_; }

 private:
  void init(std::vector<std::span<const double>> probs);
  void apply_register(Statevector& state, std::size_t reg) const;

  RegisterLayout layout_;
  std::vector<std::vector<double>> targets_;
  std::vector<std::vector<double>> reflectors_;  // v, with |v|^2 stored separately
  std::vector<double> reflector_norm2_;
};

/// |x_1..x_d>|s> -> |x_1..x_d>|s + x_1 + ... + x_d mod 2^{n_s}>, each x_i
/// read with binary weights 2^0..2^{n_i-1}. A basis permutation.
class WeightedAdder {
 public:
  explicit WeightedAdder(const RegisterLayout& layout);

  void apply(Statevector& state) const { permute(state, true); }
  void apply_inverse(Statevector& state) const { permute(state, false); }

 private:
  void permute(Statevector& state, bool forward) const;

  RegisterLayout layout_;
};

/// Checked entry point: the sum register must start in |0>.
void apply_weighted_adder(Statevector& state);

/// Strike in the integer domain of the summed registers:
/// ((K - d l) / (h - l)) (2^n - 1). Not rounded.
double map_strike(double strike_K, double low, double high, int num_qubits, int num_assets);

enum class RotationMode {
  ExactAmplitude,  // P(1|x) = f_norm(x)
  SmallAngle,      // P(1|x) = sin^2(c (f_norm(x) - 1/2) + pi/4)
};

inline constexpr double kDefaultSlope = 0.25;

struct PayoffConfig {
  double strike_mapped = 0.0;
  double slope_c = kDefaultSlope;
  RotationMode rotation_mode = RotationMode::ExactAmplitude;
  /// Domain span x_max - K_mapped used to normalize the payoff; <= 0 means the
  /// payoff is identically zero on the grid.
  double f_max = 0.0;
};

/// Builds a config for `layout`. A mapped strike below 0 keeps the payoff
/// linear over the whole domain; one at or above the domain max zeroes it.
PayoffConfig make_payoff_config(const RegisterLayout& layout, double strike_mapped,
                                RotationMode mode = RotationMode::ExactAmplitude,
                                double slope_c = kDefaultSlope);

/// clamp((x - K_mapped) / f_max, 0, 1)
double normalized_payoff(double x, const PayoffConfig& cfg) noexcept;

/// Target P(objective = 1 | x) for either rotation mode.
double objective_probability(double x, const PayoffConfig& cfg) noexcept;

/// Controlled Y-rotation of the objective qubit by the domain register value.
class PayoffRotation {
 public:
  PayoffRotation(const RegisterLayout& layout, const PayoffConfig& cfg);

  void apply(Statevector& state) const { rotate(state, false); }
  void apply_inverse(Statevector& state) const { rotate(state, true); }

  const PayoffConfig& config() const noexcept { return cfg_; }
  const RegisterLayout& layout() const noexcept { return layout_; }

 private:
  void rotate(Statevector& state, bool inverse) const;

  RegisterLayout layout_;
  PayoffConfig cfg_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

PayoffRotation build_payoff_rotation(const RegisterLayout& layout, const PayoffConfig& cfg);

/// A = payoff . adder (multi-register only) . loader
class AOperator {
 public:
  AOperator(DistributionLoader loader, PayoffRotation payoff);

  const RegisterLayout& layout() const noexcept { return layout_; }
  Encoding mode() const noexcept { return layout_.encoding(); }
  const PayoffConfig& payoff_config() const noexcept { return payoff_.config(); }

  void apply(Statevector& state) const;
  void apply_inverse(Statevector& state) const;

  /// A|0...0>
  Statevector prepare(int qubit_cap = kDefaultQubitCap) const;

  /// P(objective = 1) of A|0...0>.
  double true_amplitude(int qubit_cap = kDefaultQubitCap) const;

 private:
  RegisterLayout layout_;
  DistributionLoader loader_;
  std::optional<WeightedAdder> adder_;
  PayoffRotation payoff_;
};

AOperator build_a_operator(DistributionLoader loader, PayoffRotation payoff);

/// Amplitudes sqrt(prod p) over the asset registers (or sqrt(pi) over the
/// basket register), every other qubit in |0>.
Statevector prepare_distribution_state(std::span<const AssetGrid> grids, const RegisterLayout& layout,
                                       int qubit_cap = kDefaultQubitCap);
Statevector prepare_distribution_state(const BinnedBasketDistribution& binned, const RegisterLayout& layout,
                                       int qubit_cap = kDefaultQubitCap);

/// S_0 = 2|0><0| - I
void reflect_about_zero(Statevector& state);
/// S_psi1: negate every component whose objective qubit is 1.
void flip_good_states(Statevector& state);

/// One Grover step Q = A S_0 A^dagger S_psi1.
void grover_step(Statevector& state, const AOperator& A);
/// Applies Q^k in place.
void grover_operator_apply(Statevector& state, const AOperator& A, int k);

}  // namespace qbasket
