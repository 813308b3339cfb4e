#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qbasket {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultQubitCap = 24;

enum class Encoding {
  Direct,         // one register holding the binned basket value
  MultiRegister,  // one register per asset plus an integer sum register
};

/// Qubit allocation. Bit 0 is the least significant bit of the basis index.
/// Asset registers come first (asset 0 lowest), then the sum register, and
/// the objective qubit is always the most significant bit.
class RegisterLayout {
 public:
  static RegisterLayout direct(int basket_qubits);
  static RegisterLayout multi_register(std::vector<int> asset_qubits);

  Encoding encoding() const noexcept { return encoding_; }
  std::span<const int> asset_qubits() const noexcept { return asset_qubits_; }
  int num_registers() const noexcept { return static_cast<int>(asset_qubits_.size()); }
  int register_offset(int i) const { return offsets_.at(static_cast<std::size_t>(i)); }
  int sum_qubits() const noexcept { return sum_qubits_; }
  int sum_offset() const noexcept { return sum_offset_; }
  int objective_qubit() const noexcept { return total_qubits_ - 1; }
  int total_qubits() const noexcept { return total_qubits_; }

  /// Register the payoff reads: the sum register (multi) or the basket register (direct).
  int domain_offset() const noexcept;
  int domain_qubits() const noexcept;
  /// Largest reachable domain value: sum_i (2^{n_i} - 1) or 2^nbq - 1.
  std::uint64_t domain_max() const noexcept;

  bool operator==(const RegisterLayout&) const = default;

 private:
  Encoding encoding_ = Encoding::Direct;
  std::vector<int> asset_qubits_;
  std::vector<int> offsets_;
  int sum_qubits_ = 0;
  int sum_offset_ = 0;
  int total_qubits_ = 0;
};

/// Smallest n_s with 2^{n_s} > sum_i (2^{n_i} - 1).
int sum_register_qubits(std::span<const int> asset_qubits);

class Statevector {
 public:
  /// |0...0> over the layout; throws QubitCapExceeded beyond `qubit_cap`.
  explicit Statevector(RegisterLayout layout, int qubit_cap = kDefaultQubitCap);

  const RegisterLayout& layout() const noexcept { return layout_; }
  int num_qubits() const noexcept { return layout_.total_qubits(); }
  std::size_t size() const noexcept { return amps_.size(); }

  std::span<Amplitude> amplitudes() noexcept { return amps_; }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  Amplitude& operator[](std::size_t i) { return amps_[i]; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  /// P(qubit q reads 1).
  double probability_one(int qubit) const;
  /// Marginal distribution of a register [offset, offset + width).
  std::vector<double> register_distribution(int offset, int width) const;

  void reset();

 private:
  RegisterLayout layout_;
  std::vector<Amplitude> amps_;
};

/// Throws QubitCapExceeded when `qubits` > `cap`.
void check_qubit_cap(int qubits, int cap);

inline std::uint64_t extract_bits(std::uint64_t index, int offset, int width) noexcept {
  return (index >> offset) & ((std::uint64_t{1} << width) - 1);
}

}  // namespace qbasket
