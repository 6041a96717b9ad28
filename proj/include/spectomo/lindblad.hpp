#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "spectomo/ptm.hpp"

namespace spectomo {

/// Driven, damped qubit: Hamiltonian (h_x X + h_y Y + h_z Z)/2 plus
/// relaxation at rate gamma1 and pure dephasing at rate gamma_phi.
struct LindbladParams {
  double hx = 0.0;
  double hy = 0.0;
  double hz = 0.0;
  double gamma1 = 0.0;
  double gamma_phi = 0.0;

  double gamma2() const { return gamma1 / 2.0 + gamma_phi; }
};

/// Transfer-matrix generator of the qubit Lindbladian: zero top row,
/// first column (0, 0, 0, gamma1)^T, and lower-right block
///   [ -G2   hz   hy ]
///   [ -hz  -G2   hx ]
///   [ -hy  -hx  -G1 ].
inline Eigen::Matrix4d lindblad_generator(const LindbladParams& p) {
  if (p.gamma1 < 0.0 || p.gamma_phi < 0.0)
    throw std::invalid_argument("lindblad_generator: rates must be nonnegative");
  const double g1 = p.gamma1, g2 = p.gamma2();
  Eigen::Matrix4d l = Eigen::Matrix4d::Zero();
  l(1, 1) = -g2; l(1, 2) = p.hz;  l(1, 3) = p.hy;
  l(2, 1) = -p.hz; l(2, 2) = -g2; l(2, 3) = p.hx;
  l(3, 1) = -p.hy; l(3, 2) = -p.hx; l(3, 3) = -g1;
  l(3, 0) = g1;
  return l;
}

/// Transfer matrix of the evolution after time tau, exp(tau L), computed by
/// Eigen's scaling-and-squaring Pade approximant.
inline PauliTransferMatrix lindblad_evolve(const LindbladParams& p, double tau) {
  if (tau < 0.0)
    throw std::invalid_argument("lindblad_evolve: tau must be nonnegative");
  const Eigen::Matrix4d l = lindblad_generator(p);
  PauliTransferMatrix s;
  s.dim = 2;
  s.basis_name = "pauli";
  s.matrix = (tau * l).exp();
  detail::snap_top_row(s.matrix);
  return s;
}

/// Generator eigenvalues for the h_y = h_z = 0 case:
///   Omega_1 = -G2,
///   Omega_{2,3} = -(G1 + G2)/2 -+ sqrt((G1 - G2)^2 - 4 h_x^2)/2,
/// with the principal complex square root, so the overdamped/underdamped
/// transition at |h_x| = |G1 - G2|/2 is continuous in h_x.
inline std::array<std::complex<double>, 3> case3_eigenvalues(double gamma1,
                                                             double gamma2,
                                                             double hx) {
  if (gamma1 < 0.0 || gamma2 < 0.0)
    throw std::invalid_argument("case3_eigenvalues: rates must be nonnegative");
  const std::complex<double> disc(
      (gamma1 - gamma2) * (gamma1 - gamma2) - 4.0 * hx * hx, 0.0);
  const std::complex<double> root = std::sqrt(disc);
  const double mean = (gamma1 + gamma2) / 2.0;
  return {std::complex<double>(-gamma2, 0.0), -mean - root / 2.0,
          -mean + root / 2.0};
}

/// Small-epsilon channel whose traceless block is a Jordan block: a pair of
/// degenerate eigenvalues 1 - eps (x + y) with a single eigenvector, plus
/// 1 - 2 eps (x + y). Unital when x = 0. O(eps^2) terms are dropped.
inline PauliTransferMatrix nondiag_example(double eps, double x, double y) {
  if (eps < 0.0 || x < 0.0 || y < 0.0)
    throw std::invalid_argument("nondiag_example: parameters must be nonnegative");
  PauliTransferMatrix s;
  s.dim = 2;
  s.basis_name = "pauli";
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0 - eps * x;
  m(1, 2) = -eps * y;
  m(2, 1) = eps * y;
  m(2, 2) = 1.0 - eps * (x + 2.0 * y);
  m(3, 0) = 2.0 * eps * x;
  m(3, 3) = 1.0 - 2.0 * eps * (x + y);
  s.matrix = m;
  return s;
}

}  // namespace spectomo
