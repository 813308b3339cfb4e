#include "qbasket/estimation.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qbasket/error.hpp"

namespace qbasket {

namespace {

constexpr double kPi = std::numbers::pi;

// Keeps Q^k A|0> around so that non-decreasing powers only pay for the delta.
class GroverCache {
 public:
  GroverCache(const AOperator& A, int qubit_cap) : A_(A), state_(A.prepare(qubit_cap)), initial_(state_) {}

  double probability_at(int k) {
    if (k < power_) {
      state_ = initial_;
      power_ = 0;
    }
    grover_operator_apply(state_, A_, k - power_);
    power_ = k;
    return std::clamp(state_.probability_one(A_.layout().objective_qubit()), 0.0, 1.0);
  }

 private:
  const AOperator& A_;
  Statevector state_;
  Statevector initial_;
  int power_ = 0;
};

// Next Grover power for IAE: the largest k (scaling 4k + 2) at least twice the
// previous scaling whose scaled theta interval stays in one half-circle.
std::pair<int, bool> find_next_k(int k, bool upper, double theta_l, double theta_u) {
  const double min_ratio = 2.0;
  const double old_scaling = 4.0 * k + 2.0;
  const double width = theta_u - theta_l;
  if (!(width > 0.0)) return {k, upper};
  const double max_scaling_real = std::floor(1.0 / (2.0 * width));
  // Guard against absurd powers once the interval is near machine precision.
  long long max_scaling = static_cast<long long>(std::min(max_scaling_real, 1e12));
  long long scaling = max_scaling - ((max_scaling - 2) % 4 + 4) % 4;
  while (static_cast<double>(scaling) >= min_ratio * old_scaling) {
    const double s = static_cast<double>(scaling);
    const double lo = s * theta_l - std::floor(s * theta_l);
    const double hi = s * theta_u - std::floor(s * theta_u);
    if (lo <= hi && hi <= 0.5 && lo <= 0.5) return {static_cast<int>((scaling - 2) / 4), true};
    if (hi >= 0.5 && hi >= lo && lo >= 0.5) return {static_cast<int>((scaling - 2) / 4), false};
    scaling -= 4;
  }
  return {k, upper};
}

double arccos_turns(double p) { return std::acos(std::clamp(1.0 - 2.0 * p, -1.0, 1.0)) / (2.0 * kPi); }

}  // namespace

void fft_in_place(std::span<Amplitude> data, int sign) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) throw Error(ErrorCode::InvalidInput, "FFT length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = sign * 2.0 * kPi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        // Twiddles from the exact angle rather than a running product.
        const Amplitude w = std::polar(1.0, angle * static_cast<double>(j));
        const Amplitude u = data[start + j];
        const Amplitude v = data[start + j + len / 2] * w;
        data[start + j] = u + v;
        data[start + j + len / 2] = u - v;
      }
    }
  }
}

std::vector<double> canonical_qae_distribution(const AOperator& A, int ancillas, int qubit_cap) {
  if (ancillas < 1) throw Error(ErrorCode::InvalidInput, "canonical QAE needs >= 1 ancilla");
  const int system = A.layout().total_qubits();
  check_qubit_cap(system + ancillas, qubit_cap);

  const std::size_t m = std::size_t{1} << ancillas;
  Statevector state = A.prepare(qubit_cap);
  const std::size_t n = state.size();

  // After the Hadamards and controlled powers the joint state is
  // 2^{-m/2} sum_y |y> Q^y A|0>; row y of `branches` holds Q^y A|0>.
  std::vector<Amplitude> branches(m * n);
  for (std::size_t y = 0; y < m; ++y) {
    if (y > 0) grover_step(state, A);
    std::copy(state.amplitudes().begin(), state.amplitudes().end(), branches.begin() + static_cast<std::ptrdiff_t>(y * n));
  }

  // Inverse QFT on the phase register, one system basis state at a time.
  std::vector<double> probs(m, 0.0);
  std::vector<Amplitude> column(m);
  const double norm = 1.0 / static_cast<double>(m);  // (2^{-m/2})^2 from preparation and iQFT
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t y = 0; y < m; ++y) column[y] = branches[y * n + s];
    fft_in_place(column, -1);
    for (std::size_t k = 0; k < m; ++k) probs[k] += std::norm(column[k]) * norm * norm;
  }
  return probs;
}

AmplitudeEstimate canonical_qae(const AOperator& A, int ancillas, int qubit_cap) {
  const std::vector<double> probs = canonical_qae_distribution(A, ancillas, qubit_cap);
  const std::size_t m = probs.size();
  std::size_t best = 0;
  for (std::size_t y = 1; y < m; ++y) {
    if (probs[y] > probs[best] + 1e-13) best = y;
  }

  AmplitudeEstimate est;
  est.estimator = EstimatorKind::Canonical;
  est.ancillas = ancillas;
  est.measured_phase = best;
  est.measured_probability = probs[best];
  est.oracle_queries = m - 1;

  const double theta = kPi * static_cast<double>(best) / static_cast<double>(m);
  const double s = std::sin(theta);
  est.a_hat = s * s;
  // |theta - theta_hat| <= pi / M with probability >= 8 / pi^2.
  const double folded = std::min(theta, kPi - theta);
  const double lo = std::max(0.0, folded - kPi / static_cast<double>(m));
  const double hi = std::min(kPi / 2.0, folded + kPi / static_cast<double>(m));
  est.ci_low = std::min(est.a_hat, std::pow(std::sin(lo), 2));
  est.ci_high = std::max(est.a_hat, std::pow(std::sin(hi), 2));
  return est;
}

std::pair<double, double> clopper_pearson(double successes, double trials, double alpha) {
  if (!(trials > 0.0) || successes < 0.0 || successes > trials) {
    throw Error(ErrorCode::InvalidInput, "Clopper-Pearson needs 0 <= successes <= trials, trials > 0");
  }
  const double lo = successes <= 0.0 ? 0.0
                                     : boost::math::ibeta_inv(successes, trials - successes + 1.0, alpha / 2.0);
  const double hi =
      successes >= trials ? 1.0 : boost::math::ibeta_inv(successes + 1.0, trials - successes, 1.0 - alpha / 2.0);
  return {lo, hi};
}

AmplitudeEstimate iterative_amplitude_estimation(const AOperator& A, const IaeOptions& opts) {
  if (!(opts.eps_target > 0.0) || !(opts.eps_target < 0.5)) {
    throw Error(ErrorCode::InvalidInput, "eps_target must lie in (0, 0.5)");
  }
  if (!(opts.alpha > 0.0) || !(opts.alpha < 1.0)) throw Error(ErrorCode::InvalidInput, "alpha must lie in (0, 1)");
  if (opts.shots == 0) throw Error(ErrorCode::InvalidInput, "shots must be >= 1");
  if (opts.max_rounds < 1) throw Error(ErrorCode::InvalidInput, "max_rounds must be >= 1");

  GroverCache cache(A, opts.qubit_cap);
  std::mt19937_64 rng(opts.seed);
  const double alpha_round = opts.alpha / static_cast<double>(opts.max_rounds);
  const double shots = static_cast<double>(opts.shots);

  AmplitudeEstimate est;
  est.estimator = EstimatorKind::Iterative;

  // theta is measured in turns: a = sin^2(2 pi theta), theta in [0, 1/4].
  double theta_l = 0.0;
  double theta_u = 0.25;
  bool upper = true;
  int k = 0;
  double agg_ones = 0.0;
  double agg_shots = 0.0;
  double last_prob = 0.0;
  double last_base_l = 0.0;  // floor(scaling * theta_l) before the final update
  double last_scaling = 2.0;
  bool all_zero = true;
  bool all_one = true;

  auto a_of = [](double theta) {
    const double s = std::sin(2.0 * kPi * theta);
    return s * s;
  };

  while (a_of(theta_u) - a_of(theta_l) > 2.0 * opts.eps_target) {
    if (static_cast<int>(est.rounds.size()) >= opts.max_rounds) {
      throw Error(ErrorCode::PrecisionUnreachable,
                  "eps " + std::to_string(opts.eps_target) + " not reached within " +
                      std::to_string(opts.max_rounds) + " rounds");
    }
    const auto [next_k, next_upper] = find_next_k(k, upper, theta_l, theta_u);
    const bool same_power = !est.rounds.empty() && next_k == k;
    k = next_k;
    upper = next_upper;

    const double p = cache.probability_at(k);
    double ones = 0.0;
    if (opts.exact) {
      ones = p * shots;
    } else {
      std::binomial_distribution<std::uint64_t> draw(opts.shots, p);
      ones = static_cast<double>(draw(rng));
    }
    all_zero = all_zero && ones == 0.0;
    all_one = all_one && ones == shots;
    est.oracle_queries += opts.shots * static_cast<std::uint64_t>(2 * k + 1);

    if (same_power) {
      agg_ones += ones;
      agg_shots += shots;
    } else {
      agg_ones = ones;
      agg_shots = shots;
    }

    if (opts.exact && est.rounds.empty() && (p == 0.0 || p == 1.0)) {
      // The amplitude is known exactly; the interval collapses.
      est.a_hat = p;
      est.ci_low = p;
      est.ci_high = p;
      est.rounds.push_back({k, opts.shots, ones, p == 0.0 ? 0.0 : 0.25, p == 0.0 ? 0.0 : 0.25});
      return est;
    }

    const auto [a_min, a_max] = clopper_pearson(agg_ones, agg_shots, alpha_round);
    double frac_min = 0.0;
    double frac_max = 0.0;
    if (upper) {
      frac_min = arccos_turns(a_min);
      frac_max = arccos_turns(a_max);
    } else {
      frac_min = 1.0 - arccos_turns(a_max);
      frac_max = 1.0 - arccos_turns(a_min);
    }
    const double scaling = 4.0 * k + 2.0;
    const double base_l = std::floor(scaling * theta_l);
    const double base_u = std::floor(scaling * theta_u);
    last_base_l = base_l;
    last_scaling = scaling;
    last_prob = agg_ones / agg_shots;

    theta_u = (base_u + frac_max) / scaling;
    theta_l = (base_l + frac_min) / scaling;

    est.rounds.push_back({k, opts.shots, ones, theta_l, theta_u});
  }

  est.ci_low = a_of(theta_l);
  est.ci_high = a_of(theta_u);

  if (all_zero) {
    est.a_hat = 0.0;
  } else if (all_one) {
    est.a_hat = 1.0;
  } else {
    // Invert the last round's aggregated frequency on its branch, then clamp
    // into the final interval.
    double frac = arccos_turns(last_prob);
    if (!upper) frac = 1.0 - frac;
    const double theta_hat = std::clamp((last_base_l + frac) / last_scaling, theta_l, theta_u);
    est.a_hat = std::clamp(a_of(theta_hat), est.ci_low, est.ci_high);
  }
  return est;
}

double invert_small_angle(double a, double slope_c) noexcept {
  return std::clamp((a - 0.5) / slope_c + 0.5, 0.0, 1.0);
}

double post_process_estimate(AmplitudeEstimate& est, const PayoffConfig& cfg, const PayoffScale& scale) {
  const double span = scale.domain_high_price - scale.strike_price;
  if (!(cfg.f_max > 0.0) || !(span > 0.0)) {
    est.price_estimate = 0.0;
    return 0.0;
  }
  const double f = cfg.rotation_mode == RotationMode::ExactAmplitude ? est.a_hat
                                                                      : invert_small_angle(est.a_hat, cfg.slope_c);
  est.price_estimate = f * span;
  return est.price_estimate;
}

}  // namespace qbasket
