#include "qbasket/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qbasket/error.hpp"

namespace qbasket {

namespace {

std::vector<double> sqrt_probs(std::span<const double> probs) {
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < -1e-15) throw Error(ErrorCode::InvalidInput, "negative probability");
    out[i] = std::sqrt(std::max(0.0, probs[i]));
  }
  return out;
}

// Calls fn(base) for every basis index whose bits in [offset, offset + width) are zero.
template <typename Fn>
void for_each_block(std::size_t size, int offset, int width, Fn&& fn) {
  const std::size_t low_span = std::size_t{1} << offset;
  const std::size_t block = std::size_t{1} << (offset + width);
  for (std::size_t hi = 0; hi < size; hi += block) {
    for (std::size_t lo = 0; lo < low_span; ++lo) fn(hi + lo);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DistributionLoader

DistributionLoader::DistributionLoader(const RegisterLayout& layout, std::span<const AssetGrid> grids)
    : layout_(layout) {
  std::vector<std::span<const double>> probs;
  for (const auto& g : grids) probs.emplace_back(g.probs);
  init(std::move(probs));
}

DistributionLoader::DistributionLoader(const RegisterLayout& layout, const BinnedBasketDistribution& binned)
    : layout_(layout) {
  if (layout.encoding() != Encoding::Direct) {
    throw Error(ErrorCode::LayoutMismatch, "a binned distribution loads into the direct layout");
  }
  init({std::span<const double>(binned.probs)});
}

void DistributionLoader::init(std::vector<std::span<const double>> probs) {
  if (static_cast<int>(probs.size()) != layout_.num_registers()) {
    throw Error(ErrorCode::LayoutMismatch, std::to_string(probs.size()) + " distributions for " +
                                               std::to_string(layout_.num_registers()) + " registers");
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const std::size_t expected = std::size_t{1} << layout_.asset_qubits()[i];
    if (probs[i].size() != expected) {
      throw Error(ErrorCode::LayoutMismatch, "distribution " + std::to_string(i) + " has " +
                                                 std::to_string(probs[i].size()) + " points, register holds " +
                                                 std::to_string(expected));
    }
    targets_.push_back(sqrt_probs(probs[i]));
  }
  for (const auto& psi : targets_) {
    std::vector<double> v = psi;
    v[0] += 1.0;
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    reflectors_.push_back(std::move(v));
    reflector_norm2_.push_back(n2);
  }
}

void DistributionLoader::apply_register(Statevector& state, std::size_t reg) const {
  const int offset = layout_.register_offset(static_cast<int>(reg));
  const int width = layout_.asset_qubits()[reg];
  const std::vector<double>& v = reflectors_[reg];
  const double scale = 2.0 / reflector_norm2_[reg];
  const std::size_t dim = v.size();
  auto amps = state.amplitudes();
  for_each_block(amps.size(), offset, width, [&](std::size_t base) {
    Amplitude dot{0.0, 0.0};
    for (std::size_t j = 0; j < dim; ++j) dot += v[j] * amps[base + (j << offset)];
    dot *= scale;
    for (std::size_t j = 0; j < dim; ++j) {
      Amplitude& a = amps[base + (j << offset)];
      a = v[j] * dot - a;
    }
  });
}

void DistributionLoader::apply(Statevector& state) const {
  if (!(state.layout() == layout_)) throw Error(ErrorCode::LayoutMismatch, "loader/state layout differ");
  for (std::size_t r = 0; r < reflectors_.size(); ++r) apply_register(state, r);
}

// ---------------------------------------------------------------------------
// WeightedAdder

WeightedAdder::WeightedAdder(const RegisterLayout& layout) : layout_(layout) {
  if (layout.encoding() != Encoding::MultiRegister) {
    throw Error(ErrorCode::LayoutMismatch, "weighted adder needs the multi-register layout");
  }
  if (layout.domain_max() >= (std::uint64_t{1} << layout.sum_qubits())) {
    throw Error(ErrorCode::Overflow, "sum register too narrow for the reachable sums");
  }
}

void WeightedAdder::permute(Statevector& state, bool forward) const {
  if (!(state.layout() == layout_)) throw Error(ErrorCode::LayoutMismatch, "adder/state layout differ");
  const int s_off = layout_.sum_offset();
  const int s_width = layout_.sum_qubits();
  const std::uint64_t s_mask = (std::uint64_t{1} << s_width) - 1;
  const std::uint64_t clear = ~(s_mask << s_off);
  auto amps = state.amplitudes();
  std::vector<Amplitude> out(amps.size());
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    std::uint64_t total = 0;
    for (int r = 0; r < layout_.num_registers(); ++r) {
      total += extract_bits(i, layout_.register_offset(r), layout_.asset_qubits()[r]);
    }
    const std::uint64_t s = extract_bits(i, s_off, s_width);
    const std::uint64_t t = forward ? (s + total) & s_mask : (s - total) & s_mask;
    out[(i & clear) | (t << s_off)] = amps[i];
  }
  std::copy(out.begin(), out.end(), amps.begin());
}

void apply_weighted_adder(Statevector& state) {
  const RegisterLayout& layout = state.layout();
  const WeightedAdder adder(layout);
  for (std::uint64_t i = 0; i < state.size(); ++i) {
    if (extract_bits(i, layout.sum_offset(), layout.sum_qubits()) != 0 && std::abs(state[i]) > 1e-12) {
      throw Error(ErrorCode::SumRegisterNotZero, "sum register must start in |0>");
    }
  }
  adder.apply(state);
}

double map_strike(double strike_K, double low, double high, int num_qubits, int num_assets) {
  if (!(high > low)) throw Error(ErrorCode::DegenerateBounds, "need high > low");
  if (num_qubits < 1 || num_assets < 1) throw Error(ErrorCode::InvalidInput, "need n >= 1 and d >= 1");
  const double levels = std::ldexp(1.0, num_qubits) - 1.0;
  return (strike_K - num_assets * low) / (high - low) * levels;
}

// ---------------------------------------------------------------------------
// Payoff

PayoffConfig make_payoff_config(const RegisterLayout& layout, double strike_mapped, RotationMode mode,
                                double slope_c) {
  if (!(slope_c > 0.0) || slope_c > 1.0) {
    throw Error(ErrorCode::InvalidSlope, "c = " + std::to_string(slope_c) + " outside (0,1]");
  }
  if (!std::isfinite(strike_mapped)) throw Error(ErrorCode::InvalidInput, "mapped strike not finite");
  PayoffConfig cfg;
  cfg.strike_mapped = strike_mapped;
  cfg.slope_c = slope_c;
  cfg.rotation_mode = mode;
  cfg.f_max = static_cast<double>(layout.domain_max()) - strike_mapped;
  return cfg;
}

double normalized_payoff(double x, const PayoffConfig& cfg) noexcept {
  if (!(cfg.f_max > 0.0)) return 0.0;
  return std::clamp((x - cfg.strike_mapped) / cfg.f_max, 0.0, 1.0);
}

double objective_probability(double x, const PayoffConfig& cfg) noexcept {
  const double f = normalized_payoff(x, cfg);
  if (cfg.rotation_mode == RotationMode::ExactAmplitude) return f;
  const double s = std::sin(cfg.slope_c * (f - 0.5) + std::numbers::pi / 4.0);
  return s * s;
}

PayoffRotation::PayoffRotation(const RegisterLayout& layout, const PayoffConfig& cfg) : layout_(layout), cfg_(cfg) {
  if (!(cfg.slope_c > 0.0) || cfg.slope_c > 1.0) {
    throw Error(ErrorCode::InvalidSlope, "c = " + std::to_string(cfg.slope_c) + " outside (0,1]");
  }
  const std::size_t count = std::size_t{1} << layout.domain_qubits();
  cos_.resize(count);
  sin_.resize(count);
  for (std::size_t x = 0; x < count; ++x) {
    const double g = objective_probability(static_cast<double>(x), cfg_);
    sin_[x] = std::sqrt(std::clamp(g, 0.0, 1.0));
    cos_[x] = std::sqrt(std::clamp(1.0 - g, 0.0, 1.0));
  }
}

void PayoffRotation::rotate(Statevector& state, bool inverse) const {
  if (!(state.layout() == layout_)) throw Error(ErrorCode::LayoutMismatch, "payoff/state layout differ");
  const std::uint64_t obj = std::uint64_t{1} << layout_.objective_qubit();
  const int d_off = layout_.domain_offset();
  const int d_width = layout_.domain_qubits();
  const double sign = inverse ? -1.0 : 1.0;
  auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < obj; ++i) {
    const std::uint64_t x = extract_bits(i, d_off, d_width);
    const double c = cos_[x];
    const double s = sign * sin_[x];
    const Amplitude a0 = amps[i];
    const Amplitude a1 = amps[i | obj];
    amps[i] = c * a0 - s * a1;
    amps[i | obj] = s * a0 + c * a1;
  }
}

PayoffRotation build_payoff_rotation(const RegisterLayout& layout, const PayoffConfig& cfg) {
  return PayoffRotation(layout, cfg);
}

// ---------------------------------------------------------------------------
// A operator

AOperator::AOperator(DistributionLoader loader, PayoffRotation payoff)
    : layout_(loader.layout()), loader_(std::move(loader)), payoff_(std::move(payoff)) {
  if (!(payoff_.layout() == layout_)) throw Error(ErrorCode::LayoutMismatch, "loader and payoff layouts differ");
  if (layout_.encoding() == Encoding::MultiRegister) adder_.emplace(layout_);
}

void AOperator::apply(Statevector& state) const {
  loader_.apply(state);
  if (adder_) adder_->apply(state);
  payoff_.apply(state);
}

void AOperator::apply_inverse(Statevector& state) const {
  payoff_.apply_inverse(state);
  if (adder_) adder_->apply_inverse(state);
  loader_.apply_inverse(state);
}

Statevector AOperator::prepare(int qubit_cap) const {
  Statevector state(layout_, qubit_cap);
  apply(state);
  return state;
}

double AOperator::true_amplitude(int qubit_cap) const {
  return prepare(qubit_cap).probability_one(layout_.objective_qubit());
}

AOperator build_a_operator(DistributionLoader loader, PayoffRotation payoff) {
  return AOperator(std::move(loader), std::move(payoff));
}

Statevector prepare_distribution_state(std::span<const AssetGrid> grids, const RegisterLayout& layout,
                                       int qubit_cap) {
  Statevector state(layout, qubit_cap);
  DistributionLoader(layout, grids).apply(state);
  return state;
}

Statevector prepare_distribution_state(const BinnedBasketDistribution& binned, const RegisterLayout& layout,
                                       int qubit_cap) {
  Statevector state(layout, qubit_cap);
  DistributionLoader(layout, binned).apply(state);
  return state;
}

// ---------------------------------------------------------------------------
// Reflections and the Grover iterate

void reflect_about_zero(Statevector& state) {
  auto amps = state.amplitudes();
  for (std::size_t i = 1; i < amps.size(); ++i) amps[i] = -amps[i];
}

void flip_good_states(Statevector& state) {
  auto amps = state.amplitudes();
  const std::uint64_t obj = std::uint64_t{1} << state.layout().objective_qubit();
  for (std::uint64_t i = obj; i < amps.size(); ++i) amps[i] = -amps[i];
}

void grover_step(Statevector& state, const AOperator& A) {
  flip_good_states(state);
  A.apply_inverse(state);
  reflect_about_zero(state);
  A.apply(state);
}

void grover_operator_apply(Statevector& state, const AOperator& A, int k) {
  if (k < 0) throw Error(ErrorCode::InvalidInput, "Grover power must be >= 0");
  for (int i = 0; i < k; ++i) grover_step(state, A);
}

}  // namespace qbasket
