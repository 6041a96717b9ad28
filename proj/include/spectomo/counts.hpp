#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "spectomo/basis.hpp"
#include "spectomo/ptm.hpp"
#include "spectomo/random.hpp"
#include "spectomo/signal.hpp"

namespace spectomo {

/// One tomography experiment: prepare eigenstate `prep_eigenstate` of the
/// traceless Pauli `pauli_index`, apply the gate k times, measure in the
/// same Pauli eigenbasis `shots` times.
struct CountsRecord {
  int pauli_index = 1;           // mu in 1..4^n-1
  std::string pauli_label;
  int prep_eigenstate = 0;       // i in 0..2^n-1
  int k = 0;
  std::map<int, long> counts;    // outcome index -> count

  long total_shots() const {
    long total = 0;
    for (const auto& [outcome, c] : counts) total += c;
    return total;
  }
};

namespace detail {

/// Per-factor eigenvectors of I, X, Y, Z ordered by descending eigenvalue.
inline Eigen::Vector2cd pauli_factor_eigenvector(char letter, int bit) {
  using C = std::complex<double>;
  const double s = 1.0 / std::sqrt(2.0);
  switch (letter) {
    case 'I':
    case 'Z':
      return bit == 0 ? Eigen::Vector2cd(C(1), C(0)) : Eigen::Vector2cd(C(0), C(1));
    case 'X':
      return bit == 0 ? Eigen::Vector2cd(C(s), C(s)) : Eigen::Vector2cd(C(s), C(-s));
    case 'Y':
      return bit == 0 ? Eigen::Vector2cd(C(s), C(0, s)) : Eigen::Vector2cd(C(s), C(0, -s));
  }
  throw std::invalid_argument("pauli_factor_eigenvector: bad letter");
}

}  // namespace detail

/// Eigenstate `index` of the n-qubit Pauli with the given label, enumerated
/// per factor by descending eigenvalue, leftmost factor most significant.
inline Eigen::VectorXcd pauli_eigenstate(const std::string& label, int index) {
  const int n = static_cast<int>(label.size());
  Eigen::VectorXcd state = Eigen::VectorXcd::Ones(1);
  for (int q = 0; q < n; ++q) {
    const int bit = (index >> (n - 1 - q)) & 1;
    const Eigen::Vector2cd factor =
        detail::pauli_factor_eigenvector(label[static_cast<std::size_t>(q)], bit);
    Eigen::VectorXcd next(state.size() * 2);
    for (Eigen::Index r = 0; r < state.size(); ++r)
      next.segment<2>(2 * r) = state[r] * factor;
    state = std::move(next);
  }
  return state;
}

/// Eigenvalue of the *normalized* Pauli for that eigenstate: the product of
/// per-factor signs (identity factors contribute +1) over sqrt(2^n).
inline double pauli_eigenstate_sign(const std::string& label, int index) {
  const int n = static_cast<int>(label.size());
  double sign = 1.0;
  for (int q = 0; q < n; ++q) {
    const int bit = (index >> (n - 1 - q)) & 1;
    if (label[static_cast<std::size_t>(q)] != 'I' && bit == 1) sign = -sign;
  }
  return sign / std::sqrt(static_cast<double>(1 << n));
}

/// Simulate the counts of one experiment under prep/gate^k/meas with SPAM.
/// Outcome probabilities below -1e-9 indicate an invalid channel and throw;
/// smaller negative values are rounding and get clamped.
inline CountsRecord simulate_counts(const PauliTransferMatrix& gate,
                                    const SpamModel& spam, int pauli_index,
                                    int prep_eigenstate, int k, long shots,
                                    std::uint64_t seed) {
  const OperatorBasis basis = basis_for(gate);
  const int d = gate.dim;
  if (pauli_index < 1 || pauli_index >= basis.size())
    throw std::invalid_argument("simulate_counts: pauli_index must be traceless");
  if (prep_eigenstate < 0 || prep_eigenstate >= d)
    throw std::invalid_argument("simulate_counts: bad eigenstate index");

  const std::string& label = basis.labels[static_cast<std::size_t>(pauli_index)];
  const Eigen::VectorXcd psi = pauli_eigenstate(label, prep_eigenstate);
  const Eigen::MatrixXcd rho = psi * psi.adjoint();

  const PauliTransferMatrix chain =
      ptm_compose(spam.meas, ptm_compose(ptm_power(gate, k), spam.prep));
  const Eigen::MatrixXcd out = apply_channel(chain, basis, rho);

  Eigen::VectorXd probs(d);
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXcd phi = pauli_eigenstate(label, j);
    const double p = (phi.adjoint() * out * phi).value().real();
    if (p < -1e-9)
      throw std::runtime_error("simulate_counts: negative outcome probability");
    probs[j] = std::max(p, 0.0);
  }
  probs /= probs.sum();

  CountsRecord record;
  record.pauli_index = pauli_index;
  record.pauli_label = label;
  record.prep_eigenstate = prep_eigenstate;
  record.k = k;
  auto stream = RandomStream::keyed(seed, static_cast<std::uint64_t>(pauli_index),
                                    static_cast<std::uint64_t>(prep_eigenstate),
                                    static_cast<std::uint64_t>(k));
  const std::vector<long> drawn = stream.multinomial(shots, probs);
  for (int j = 0; j < d; ++j)
    if (drawn[static_cast<std::size_t>(j)] > 0)
      record.counts[j] = drawn[static_cast<std::size_t>(j)];
  return record;
}

struct IngestResult {
  SpectralSignal signal;
  bool uniform_shots = true;
  long min_shots = 0;
  long max_shots = 0;
};

/// Estimate g(k) from measurement records:
///   g_hat(k) = sum_mu sum_{i,j} s_i s_j p_hat(j | i, mu, k),
/// where s are the eigenvalues of the normalized Pauli. Every
/// (mu, eigenstate, k) combination must be covered; duplicate records for a
/// combination pool their counts. Uneven shot counts are allowed and
/// reported through the result flags.
inline IngestResult estimate_g_from_counts(const std::vector<CountsRecord>& records,
                                           int n_qubits, int max_index) {
  const int d = 1 << n_qubits;
  const int n_paulis = (1 << (2 * n_qubits)) - 1;
  const OperatorBasis basis = pauli_basis(n_qubits);

  // merged[(mu, i, k)] -> counts
  std::map<std::tuple<int, int, int>, std::map<int, long>> merged;
  for (const auto& r : records) {
    int mu = r.pauli_index;
    if (!r.pauli_label.empty()) {
      const auto it = std::find(basis.labels.begin(), basis.labels.end(), r.pauli_label);
      if (it == basis.labels.end())
        throw std::invalid_argument("estimate_g_from_counts: unknown Pauli label " +
                                    r.pauli_label);
      mu = static_cast<int>(it - basis.labels.begin());
    }
    if (mu < 1 || mu > n_paulis)
      throw std::invalid_argument("estimate_g_from_counts: Pauli index out of range");
    auto& bucket = merged[{mu, r.prep_eigenstate, r.k}];
    for (const auto& [outcome, c] : r.counts) bucket[outcome] += c;
  }

  IngestResult result;
  result.signal.n_qubits = n_qubits;
  result.signal.values = Eigen::VectorXd::Zero(max_index + 1);
  result.signal.source = SpectralSignal::Source::ingested;
  result.min_shots = std::numeric_limits<long>::max();
  result.max_shots = 0;

  std::string missing;
  for (int k = 0; k <= max_index; ++k) {
    double gk = 0.0;
    for (int mu = 1; mu <= n_paulis; ++mu) {
      const std::string& label = basis.labels[static_cast<std::size_t>(mu)];
      for (int i = 0; i < d; ++i) {
        const auto it = merged.find({mu, i, k});
        if (it == merged.end()) {
          if (!missing.empty()) missing += ", ";
          if (missing.size() < 200)
            missing += "(" + label + ", " + std::to_string(i) + ", k=" +
                       std::to_string(k) + ")";
          continue;
        }
        long shots = 0;
        for (const auto& [outcome, c] : it->second) shots += c;
        if (shots <= 0) {
          missing += "(" + label + ", " + std::to_string(i) + ", k=" +
                     std::to_string(k) + " empty)";
          continue;
        }
        result.min_shots = std::min(result.min_shots, shots);
        result.max_shots = std::max(result.max_shots, shots);
        const double si = pauli_eigenstate_sign(label, i);
        for (const auto& [outcome, c] : it->second) {
          const double sj = pauli_eigenstate_sign(label, outcome);
          gk += si * sj * static_cast<double>(c) / static_cast<double>(shots);
        }
      }
    }
    result.signal.values[k] = gk;
  }
  if (!missing.empty())
    throw std::invalid_argument("estimate_g_from_counts: missing combinations: " +
                                missing);
  result.uniform_shots = result.min_shots == result.max_shots;
  result.signal.n_samples = static_cast<double>(result.min_shots);
  return result;
}

}  // namespace spectomo
