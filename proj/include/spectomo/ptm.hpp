#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "spectomo/basis.hpp"

namespace spectomo {

/// Transfer matrix of a trace-preserving map in an orthonormal Hermitian
/// basis: a real (d^2)x(d^2) matrix whose top row is (1, 0, ..., 0).
/// The lower-right block T drives the repeated-gate signal; the first
/// column's tail s is the affine (non-unital) part.
struct PauliTransferMatrix {
  int dim = 0;
  Eigen::MatrixXd matrix;
  std::string basis_name = "pauli";

  Eigen::Index n() const { return matrix.rows() - 1; }

  auto traceless_block() const { return matrix.bottomRightCorner(n(), n()); }

  Eigen::VectorXd affine_vector() const { return matrix.col(0).tail(n()); }
};

struct ValidityReport {
  bool tp_ok = false;
  bool real_ok = false;
  bool modulus_ok = false;
  bool cp_ok = false;
  double worst_violation = 0.0;
  std::string notes;

  bool all_ok() const { return tp_ok && real_ok && modulus_ok && cp_ok; }
};

inline PauliTransferMatrix ptm_identity(int d, std::string basis_name = "pauli") {
  PauliTransferMatrix s;
  s.dim = d;
  s.basis_name = std::move(basis_name);
  s.matrix = Eigen::MatrixXd::Identity(d * d, d * d);
  return s;
}

namespace detail {

inline void snap_top_row(Eigen::MatrixXd& m) {
  m.row(0).setZero();
  m(0, 0) = 1.0;
}

}  // namespace detail

/// Transfer matrix of the channel rho -> sum_i A_i rho A_i^dag:
/// S_{mu nu} = Tr[B_mu sum_i A_i B_nu A_i^dag].
/// The Kraus set must be trace preserving (sum A_i^dag A_i = I to 1e-10).
/// Trace preservation is structural, so the top row is snapped to
/// (1, 0, ..., 0) after the residual check.
inline PauliTransferMatrix ptm_from_kraus(
    const std::vector<Eigen::MatrixXcd>& kraus, const OperatorBasis& basis) {
  const int d = basis.dim;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& a : kraus) {
    if (a.rows() != d || a.cols() != d)
      throw std::invalid_argument("ptm_from_kraus: Kraus dimension mismatch");
    sum += a.adjoint() * a;
  }
  if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("ptm_from_kraus: Kraus set is not trace preserving");

  const int n = basis.size();
  PauliTransferMatrix s;
  s.dim = d;
  s.basis_name = basis.name;
  s.matrix.resize(n, n);
  std::vector<Eigen::MatrixXcd> mapped(static_cast<std::size_t>(n));
  for (int nu = 0; nu < n; ++nu) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& a : kraus) out += a * basis.elements[nu] * a.adjoint();
    mapped[static_cast<std::size_t>(nu)] = out;
  }
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const std::complex<double> t =
          (basis.elements[mu] * mapped[static_cast<std::size_t>(nu)]).trace();
      if (std::abs(t.imag()) > 1e-10)
        throw std::runtime_error("ptm_from_kraus: non-real transfer entry");
      s.matrix(mu, nu) = t.real();
    }
  }
  if ((s.matrix.row(0) - Eigen::RowVectorXd::Unit(n, 0)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::runtime_error("ptm_from_kraus: top row deviates from (1, 0, ...)");
  detail::snap_top_row(s.matrix);
  return s;
}

/// Composition a after b: ptm(a o b) = ptm(a) * ptm(b).
inline PauliTransferMatrix ptm_compose(const PauliTransferMatrix& a,
                                       const PauliTransferMatrix& b) {
  if (a.matrix.cols() != b.matrix.rows() || a.basis_name != b.basis_name)
    throw std::invalid_argument("ptm_compose: dimension or basis mismatch");
  PauliTransferMatrix s;
  s.dim = a.dim;
  s.basis_name = a.basis_name;
  s.matrix = a.matrix * b.matrix;
  detail::snap_top_row(s.matrix);
  return s;
}

/// Matrix power by repeated squaring; k = 0 gives the identity map.
inline PauliTransferMatrix ptm_power(const PauliTransferMatrix& s, long k) {
  if (k < 0) throw std::invalid_argument("ptm_power: negative exponent");
  PauliTransferMatrix out = ptm_identity(s.dim, s.basis_name);
  Eigen::MatrixXd base = s.matrix;
  long e = k;
  while (e > 0) {
    if (e & 1) out.matrix = out.matrix * base;
    if (e >>= 1) base = base * base;
  }
  detail::snap_top_row(out.matrix);
  return out;
}

inline OperatorBasis basis_for(const PauliTransferMatrix& s) {
  if (s.basis_name == "gellmann") return gellmann_basis();
  int n_qubits = 0, d = s.dim;
  while (d > 1) { d >>= 1; ++n_qubits; }
  return pauli_basis(n_qubits);
}

/// Apply the map described by `s` to an operator (Hermitian or not) by
/// expanding it in the basis, acting with the transfer matrix, and
/// reassembling.
inline Eigen::MatrixXcd apply_channel(const PauliTransferMatrix& s,
                                      const OperatorBasis& basis,
                                      const Eigen::MatrixXcd& op) {
  const int n = basis.size();
  Eigen::VectorXcd coords(n);
  for (int nu = 0; nu < n; ++nu)
    coords[nu] = (basis.elements[nu] * op).trace();
  const Eigen::VectorXcd out = s.matrix * coords;
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(basis.dim, basis.dim);
  for (int mu = 0; mu < n; ++mu) result += out[mu] * basis.elements[mu];
  return result;
}

/// Choi matrix of the map, normalized to unit trace. Positive semidefinite
/// exactly when the map is completely positive.
inline Eigen::MatrixXcd choi_matrix(const PauliTransferMatrix& s) {
  const OperatorBasis basis = basis_for(s);
  const int d = s.dim;
  Eigen::MatrixXcd choi(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(d, d);
      unit(i, j) = 1.0;
      const Eigen::MatrixXcd mapped = apply_channel(s, basis, unit);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          choi(r * d + i, c * d + j) = mapped(r, c) / static_cast<double>(d);
    }
  }
  return (choi + choi.adjoint()) / 2.0;
}

/// Structural and physicality checks: top row, finite real entries,
/// spectral radius <= 1 + 1e-9, and complete positivity through the minimum
/// eigenvalue of the unit-trace Choi matrix (>= -1e-9).
inline ValidityReport validate_ptm(const PauliTransferMatrix& s) {
  ValidityReport report;
  const Eigen::Index n = s.matrix.rows();

  const double top_err =
      (s.matrix.row(0) - Eigen::RowVectorXd::Unit(n, 0)).cwiseAbs().maxCoeff();
  report.tp_ok = top_err <= 1e-12;
  report.worst_violation = std::max(report.worst_violation, top_err);

  report.real_ok = s.matrix.allFinite();
  if (!report.real_ok) {
    report.notes += "non-finite entries; ";
    return report;
  }

  const Eigen::MatrixXd t = s.traceless_block();
  Eigen::EigenSolver<Eigen::MatrixXd> es(t, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("validate_ptm: eigensolver failed to converge");
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  report.modulus_ok = radius <= 1.0 + 1e-9;
  if (!report.modulus_ok) {
    report.worst_violation = std::max(report.worst_violation, radius - 1.0);
    report.notes += "spectral radius " + std::to_string(radius) + "; ";
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ces(choi_matrix(s),
                                                      Eigen::EigenvaluesOnly);
  const double min_eig = ces.eigenvalues().minCoeff();
  report.cp_ok = min_eig >= -1e-9;
  if (!report.cp_ok) {
    report.worst_violation = std::max(report.worst_violation, -min_eig);
    report.notes += "Choi min eigenvalue " + std::to_string(min_eig) + "; ";
  }
  return report;
}

}  // namespace spectomo
