#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "spectomo/ptm.hpp"
#include "spectomo/random.hpp"

namespace spectomo {

/// The scalar repeated-gate signal g(0..K) with provenance. `n_samples` is
/// the shot count behind each point; empty means the values are exact.
struct SpectralSignal {
  enum class Source { simulated_exact, simulated_noisy, ingested };

  int n_qubits = 1;
  Eigen::VectorXd values;
  std::optional<double> n_samples;
  Source source = Source::simulated_exact;

  int max_index() const { return static_cast<int>(values.size()) - 1; }
};

/// Preparation and measurement imperfections, each a trace-preserving map
/// wrapped around the repeated gate.
struct SpamModel {
  PauliTransferMatrix prep;
  PauliTransferMatrix meas;

  static SpamModel identity(int d) {
    return {ptm_identity(d), ptm_identity(d)};
  }
};

namespace detail {

/// Qubit count whose traceless block has the given dimension (0 if none).
inline int qubits_for_block(Eigen::Index n) {
  for (int q = 1; q <= 3; ++q)
    if ((Eigen::Index{1} << (2 * q)) - 1 == n) return q;
  return 0;
}

}  // namespace detail

/// g(k) = Tr[T^k] for k = 0..K, the SPAM-free power-sum of the traceless
/// block's eigenvalues (valid whether or not T is diagonalizable).
inline SpectralSignal signal_nospam(const Eigen::Ref<const Eigen::MatrixXd>& t,
                                    int max_index, int n_qubits = 0) {
  if (max_index < 0)
    throw std::invalid_argument("signal_nospam: K must be nonnegative");
  SpectralSignal sig;
  sig.n_qubits = n_qubits > 0 ? n_qubits : detail::qubits_for_block(t.rows());
  sig.values.resize(max_index + 1);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(t.rows(), t.cols());
  for (int k = 0; k <= max_index; ++k) {
    sig.values[k] = power.trace();
    if (k < max_index) power = t * power;
  }
  return sig;
}

/// g(k) = Tr[T_meas T^k T_prep]: the SPAM-weighted signal. SPAM changes the
/// amplitudes attached to each eigenvalue but not the eigenvalues.
inline SpectralSignal signal_spam(const Eigen::Ref<const Eigen::MatrixXd>& t,
                                  const SpamModel& spam, int max_index) {
  const Eigen::MatrixXd t_prep = spam.prep.traceless_block();
  const Eigen::MatrixXd t_meas = spam.meas.traceless_block();
  if (t_prep.rows() != t.rows() || t_meas.rows() != t.rows())
    throw std::invalid_argument("signal_spam: dimension mismatch");
  SpectralSignal sig;
  sig.n_qubits = detail::qubits_for_block(t.rows());
  sig.values.resize(max_index + 1);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(t.rows(), t.cols());
  for (int k = 0; k <= max_index; ++k) {
    sig.values[k] = (t_meas * power * t_prep).trace();
    if (k < max_index) power = t * power;
  }
  return sig;
}

/// Gaussian surrogate for sampling noise: each point is perturbed by an
/// independent N(0, 1/n_samples) draw from a per-index stream, so the output
/// does not depend on evaluation order.
inline SpectralSignal add_shot_noise(const SpectralSignal& g, double n_samples,
                                     std::uint64_t seed) {
  if (n_samples < 1.0)
    throw std::invalid_argument("add_shot_noise: n_samples must be >= 1");
  SpectralSignal noisy = g;
  const double sd = 1.0 / std::sqrt(n_samples);
  for (int k = 0; k <= g.max_index(); ++k) {
    auto stream = RandomStream::keyed(seed, static_cast<std::uint64_t>(k));
    noisy.values[k] += sd * stream.gaussian();
  }
  noisy.n_samples = n_samples;
  noisy.source = SpectralSignal::Source::simulated_noisy;
  return noisy;
}

/// Leakage signal for a single qutrit: the trace of the leading 3x3 block of
/// (T_GM)^k, i.e. the part of the dynamics seen through the computational
/// X, Y, Z observables.
inline SpectralSignal leakage_signal(const Eigen::Ref<const Eigen::MatrixXd>& t_gm,
                                     int max_index) {
  if (t_gm.rows() != 8 || t_gm.cols() != 8)
    throw std::invalid_argument("leakage_signal: expected the 8x8 traceless block");
  SpectralSignal sig;
  sig.n_qubits = 1;
  sig.values.resize(max_index + 1);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(8, 8);
  for (int k = 0; k <= max_index; ++k) {
    sig.values[k] = power.topLeftCorner(3, 3).trace();
    if (k < max_index) power = t_gm * power;
  }
  return sig;
}

/// Number of distinct experiments needed to estimate g(0..K) on n qubits:
/// 2^n basis states for each of the 4^n - 1 traceless observables at each
/// of the K + 1 sequence lengths.
inline long experiment_budget(int n_qubits, int max_index) {
  if (n_qubits < 1 || max_index < 0)
    throw std::invalid_argument("experiment_budget: invalid arguments");
  const long states = 1L << n_qubits;
  const long paulis = (1L << (2 * n_qubits)) - 1;
  return states * paulis * (max_index + 1);
}

}  // namespace spectomo
