#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spectomo {

/// An orthonormal Hermitian operator basis for a d-dimensional system:
/// d^2 matrices with Tr[B_mu B_nu] = delta_{mu nu}, element 0 = I/sqrt(d).
struct OperatorBasis {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> elements;
  std::vector<std::string> labels;
  std::string name;

  int size() const { return static_cast<int>(elements.size()); }
};

namespace detail {

inline const Eigen::Matrix2cd& sigma(int a) {
  using C = std::complex<double>;
  static const Eigen::Matrix2cd mats[4] = {
      (Eigen::Matrix2cd() << C(1), C(0), C(0), C(1)).finished(),
      (Eigen::Matrix2cd() << C(0), C(1), C(1), C(0)).finished(),
      (Eigen::Matrix2cd() << C(0), C(0, -1), C(0, 1), C(0)).finished(),
      (Eigen::Matrix2cd() << C(1), C(0), C(0), C(-1)).finished()};
  return mats[a];
}

}  // namespace detail

/// Normalized n-qubit Pauli basis, 4^n elements. Ordering is factor-major:
/// the leftmost qubit's letter varies slowest, letters run I, X, Y, Z.
/// Element 0 is I/sqrt(2^n).
inline OperatorBasis pauli_basis(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 3)
    throw std::invalid_argument("pauli_basis: qubit count must be in [1, 3]");
  static const char* letters = "IXYZ";
  const int d = 1 << n_qubits;
  const int count = d * d;
  OperatorBasis basis;
  basis.dim = d;
  basis.name = "pauli";
  basis.elements.reserve(count);
  basis.labels.reserve(count);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int idx = 0; idx < count; ++idx) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    std::string label;
    for (int q = n_qubits - 1; q >= 0; --q) {
      const int a = (idx >> (2 * q)) & 3;
      label.push_back(letters[a]);
      Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          next.block<2, 2>(2 * r, 2 * c) = m(r, c) * detail::sigma(a);
      m = std::move(next);
    }
    basis.elements.push_back(norm * m);
    basis.labels.push_back(label);
  }
  return basis;
}

/// Qutrit basis: I/sqrt(3) followed by the 8 Gell-Mann matrices normalized to
/// Tr[g_i g_j] = delta_ij. The first three traceless elements act as X, Y, Z
/// on the span of levels 0 and 1, so the leading 3x3 block of a transfer
/// matrix in this basis is the computational-subspace block.
inline OperatorBasis gellmann_basis() {
  using C = std::complex<double>;
  OperatorBasis basis;
  basis.dim = 3;
  basis.name = "gellmann";
  auto add = [&basis](const char* label, const Eigen::Matrix3cd& m) {
    basis.elements.push_back(m);
    basis.labels.emplace_back(label);
  };
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s3 = 1.0 / std::sqrt(3.0);
  const double s6 = 1.0 / std::sqrt(6.0);
  Eigen::Matrix3cd m;

  add("E0", Eigen::Matrix3cd::Identity() * s3);
  m.setZero(); m(0, 1) = s2; m(1, 0) = s2;             add("X01", m);
  m.setZero(); m(0, 1) = C(0, -s2); m(1, 0) = C(0, s2); add("Y01", m);
  m.setZero(); m(0, 0) = s2; m(1, 1) = -s2;            add("Z01", m);
  m.setZero(); m(0, 2) = s2; m(2, 0) = s2;             add("X02", m);
  m.setZero(); m(0, 2) = C(0, -s2); m(2, 0) = C(0, s2); add("Y02", m);
  m.setZero(); m(1, 2) = s2; m(2, 1) = s2;             add("X12", m);
  m.setZero(); m(1, 2) = C(0, -s2); m(2, 1) = C(0, s2); add("Y12", m);
  m.setZero(); m(0, 0) = s6; m(1, 1) = s6; m(2, 2) = -2.0 * s6; add("D8", m);
  return basis;
}

/// Gram matrix G_ij = Tr[B_i B_j]; identity for an orthonormal basis.
inline Eigen::MatrixXd gram_matrix(const OperatorBasis& basis) {
  const int n = basis.size();
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = (basis.elements[i].adjoint() * basis.elements[j])
                    .trace().real();
  return g;
}

}  // namespace spectomo
