#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qbasket/distribution.hpp"
#include "qbasket/operators.hpp"

namespace qbasket {

enum class EstimatorKind { Iterative, Canonical };

struct IaeRound {
  int grover_power = 0;
  std::uint64_t shots = 0;
  double one_count = 0.0;  // fractional in exact mode
  double theta_low = 0.0;  // confidence interval on theta / (2 pi) after the round
  double theta_high = 0.0;
};

struct AmplitudeEstimate {
  EstimatorKind estimator = EstimatorKind::Iterative;
  double a_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t oracle_queries = 0;
  double price_estimate = 0.0;  // filled by post_process_estimate

  // canonical QAE metadata
  int ancillas = 0;
  std::uint64_t measured_phase = 0;  // most likely y in [0, 2^ancillas)
  double measured_probability = 0.0;

  // IAE metadata
  std::vector<IaeRound> rounds;
};

/// Phase estimation over Q with `ancillas` counting qubits and an inverse QFT.
/// The measurement distribution is computed exactly; a_hat comes from the most
/// likely outcome y as sin^2(pi y / 2^ancillas).
AmplitudeEstimate canonical_qae(const AOperator& A, int ancillas, int qubit_cap = kDefaultQubitCap);

/// Probabilities of every phase-register outcome y for canonical QAE.
std::vector<double> canonical_qae_distribution(const AOperator& A, int ancillas,
                                               int qubit_cap = kDefaultQubitCap);

struct IaeOptions {
  double eps_target = 1e-3;
  double alpha = 0.05;
  std::uint64_t shots = 1024;
  /// Read probabilities from the statevector; `shots` is then the nominal
  /// sample size used for the Clopper-Pearson intervals.
  bool exact = true;
  std::uint64_t seed = 42;
  int max_rounds = 100;
  int qubit_cap = kDefaultQubitCap;
};

AmplitudeEstimate iterative_amplitude_estimation(const AOperator& A, const IaeOptions& opts);

/// Two-sided Clopper-Pearson interval for `successes` out of `trials` at
/// confidence 1 - alpha. Accepts fractional success counts.
std::pair<double, double> clopper_pearson(double successes, double trials, double alpha);

/// Price-space scale of the encoded payoff.
struct PayoffScale {
  double domain_high_price = 0.0;  // basket price at the top of the domain
  double strike_price = 0.0;
};

/// Undoes the payoff normalization: a_hat (or its small-angle inverse) times
/// (high - K). Writes the result into est.price_estimate and returns it.
double post_process_estimate(AmplitudeEstimate& est, const PayoffConfig& cfg, const PayoffScale& scale);

/// Inverse of the small-angle rotation convention: (a - 1/2) / c + 1/2, clamped to [0, 1].
double invert_small_angle(double a, double slope_c) noexcept;

/// In-place radix-2 FFT with e^{sign 2 pi i jk / N}, no normalization.
void fft_in_place(std::span<Amplitude> data, int sign);

}  // namespace qbasket
