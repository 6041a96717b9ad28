#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectomo/basis.hpp"
#include "spectomo/ptm.hpp"

namespace spectomo {

inline Eigen::Matrix2cd rx_gate(double theta) {
  using C = std::complex<double>;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return (Eigen::Matrix2cd() << C(c), C(0, -s), C(0, -s), C(c)).finished();
}

inline Eigen::Matrix2cd ry_gate(double theta) {
  using C = std::complex<double>;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return (Eigen::Matrix2cd() << C(c), C(-s), C(s), C(c)).finished();
}

inline Eigen::Matrix2cd rz_gate(double theta) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::exp(std::complex<double>(0, -theta / 2));
  m(1, 1) = std::exp(std::complex<double>(0, theta / 2));
  return m;
}

inline Eigen::Matrix4cd cz_gate() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(3, 3) = -1.0;
  return m;
}

/// CNOT with the leftmost qubit as control.
inline Eigen::Matrix4cd cnot_gate() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

/// Channel rho -> U rho U^dag for a unitary U of dimension 2^n.
inline PauliTransferMatrix unitary_channel(const Eigen::MatrixXcd& u) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d || (d & (d - 1)) != 0 || d < 2 || d > 8)
    throw std::invalid_argument("unitary_channel: need a square 2^n matrix, n in [1, 3]");
  if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("unitary_channel: matrix is not unitary");
  int n_qubits = 0;
  for (int v = d; v > 1; v >>= 1) ++n_qubits;
  return ptm_from_kraus({u}, pauli_basis(n_qubits));
}

/// rho -> (1 - p) rho + p I/d on n qubits.
inline PauliTransferMatrix depolarizing_channel(int n_qubits, double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("depolarizing_channel: p must lie in [0, 1]");
  const OperatorBasis basis = pauli_basis(n_qubits);
  const int d = basis.dim;
  const double dd = static_cast<double>(d) * d;
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(static_cast<std::size_t>(basis.size()));
  const double rest = std::sqrt(p / dd) * std::sqrt(static_cast<double>(d));
  kraus.push_back(std::sqrt(1.0 - p + p / dd) *
                  Eigen::MatrixXcd::Identity(d, d));
  for (int mu = 1; mu < basis.size(); ++mu)
    kraus.push_back(rest * basis.elements[mu]);
  return ptm_from_kraus(kraus, basis);
}

/// Single-qubit amplitude damping with damping rate p.
inline PauliTransferMatrix amplitude_damping_channel(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("amplitude_damping_channel: p must lie in [0, 1]");
  Eigen::Matrix2cd a0 = Eigen::Matrix2cd::Zero(), a1 = Eigen::Matrix2cd::Zero();
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - p);
  a1(0, 1) = std::sqrt(p);
  return ptm_from_kraus({a0, a1}, pauli_basis(1));
}

inline PauliTransferMatrix cz_channel() { return unitary_channel(cz_gate()); }

inline PauliTransferMatrix cnot_channel() { return unitary_channel(cnot_gate()); }

enum class ChannelKind { depolarizing, amplitude_damping, unitary, cz, cnot };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::depolarizing;
  int n_qubits = 1;
  double p = 0.0;
  Eigen::MatrixXcd unitary;
};

inline PauliTransferMatrix channel_library(const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelKind::depolarizing:
      return depolarizing_channel(spec.n_qubits, spec.p);
    case ChannelKind::amplitude_damping:
      return amplitude_damping_channel(spec.p);
    case ChannelKind::unitary:
      return unitary_channel(spec.unitary);
    case ChannelKind::cz:
      return cz_channel();
    case ChannelKind::cnot:
      return cnot_channel();
  }
  throw std::invalid_argument("channel_library: unknown channel kind");
}

}  // namespace spectomo
