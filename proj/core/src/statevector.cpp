#include "qbasket/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbasket/error.hpp"
#include "qbasket/numeric.hpp"

namespace qbasket {

int sum_register_qubits(std::span<const int> asset_qubits) {
  std::uint64_t max_sum = 0;
  for (int n : asset_qubits) max_sum += (std::uint64_t{1} << n) - 1;
  int bits = 0;
  while ((std::uint64_t{1} << bits) <= max_sum) ++bits;
  return bits;
}

RegisterLayout RegisterLayout::direct(int basket_qubits) {
  if (basket_qubits < 1) throw Error(ErrorCode::LayoutMismatch, "basket register needs >= 1 qubit");
  RegisterLayout l;
  l.encoding_ = Encoding::Direct;
  l.asset_qubits_ = {basket_qubits};
  l.offsets_ = {0};
  l.sum_qubits_ = 0;
  l.sum_offset_ = basket_qubits;
  l.total_qubits_ = basket_qubits + 1;
  return l;
}

RegisterLayout RegisterLayout::multi_register(std::vector<int> asset_qubits) {
  if (asset_qubits.empty()) throw Error(ErrorCode::LayoutMismatch, "no asset registers");
  RegisterLayout l;
  l.encoding_ = Encoding::MultiRegister;
  int offset = 0;
  for (int n : asset_qubits) {
    if (n < 1) throw Error(ErrorCode::LayoutMismatch, "asset register needs >= 1 qubit");
    l.offsets_.push_back(offset);
    offset += n;
  }
  l.sum_qubits_ = sum_register_qubits(asset_qubits);
  l.sum_offset_ = offset;
  l.total_qubits_ = offset + l.sum_qubits_ + 1;
  l.asset_qubits_ = std::move(asset_qubits);
  return l;
}

int RegisterLayout::domain_offset() const noexcept {
  return encoding_ == Encoding::Direct ? 0 : sum_offset_;
}

int RegisterLayout::domain_qubits() const noexcept {
  return encoding_ == Encoding::Direct ? asset_qubits_.front() : sum_qubits_;
}

std::uint64_t RegisterLayout::domain_max() const noexcept {
  if (encoding_ == Encoding::Direct) return (std::uint64_t{1} << asset_qubits_.front()) - 1;
  std::uint64_t total = 0;
  for (int n : asset_qubits_) total += (std::uint64_t{1} << n) - 1;
  return total;
}

void check_qubit_cap(int qubits, int cap) {
  if (qubits > cap) {
    throw Error(ErrorCode::QubitCapExceeded,
                std::to_string(qubits) + " qubits requested, cap is " + std::to_string(cap));
  }
}

Statevector::Statevector(RegisterLayout layout, int qubit_cap) : layout_(std::move(layout)) {
  check_qubit_cap(layout_.total_qubits(), qubit_cap);
  amps_.assign(std::size_t{1} << layout_.total_qubits(), Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

void Statevector::reset() {
  std::fill(amps_.begin(), amps_.end(), Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

double Statevector::norm() const {
  CompensatedSum acc;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc.value());
}

double Statevector::probability_one(int qubit) const {
  CompensatedSum acc;
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) acc += std::norm(amps_[i]);
  }
  return acc.value();
}

std::vector<double> Statevector::register_distribution(int offset, int width) const {
  std::vector<double> out(std::size_t{1} << width, 0.0);
  for (std::uint64_t i = 0; i < amps_.size(); ++i) out[extract_bits(i, offset, width)] += std::norm(amps_[i]);
  return out;
}

}  // namespace qbasket
