#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace spectomo {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;  // sum to sqrt(pi)
};

/// Gauss-Hermite nodes and weights for integrals of the form
/// int exp(-x^2) f(x) dx. Nodes are the eigenvalues of the symmetric
/// tridiagonal Jacobi matrix (zero diagonal, off-diagonal sqrt(k/2),
/// the Golub-Welsch construction); weights come from the Christoffel
/// function 1 / sum_k p_k(x)^2 of the orthonormal Hermite polynomials,
/// evaluated with running rescaling so that high orders neither overflow
/// nor underflow.
inline QuadratureRule gauss_hermite(int order) {
  if (order < 1)
    throw std::invalid_argument("gauss_hermite: order must be positive");

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd subdiag(order > 1 ? order - 1 : 0);
  for (int k = 1; k < order; ++k) subdiag[k - 1] = std::sqrt(k / 2.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite: tridiagonal eigensolver failed");

  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(order);

  const double log2 = std::log(2.0);
  for (int i = 0; i < order; ++i) {
    const double x = rule.nodes[i];
    // sum_k p_k(x)^2 with p_k orthonormal; q = p * 2^-shift keeps the
    // recurrence in range.
    double q_prev = 0.0;
    double q = std::pow(M_PI, -0.25);
    double sum = q * q;
    long shift = 0;
    for (int k = 0; k + 1 < order; ++k) {
      const double b_next = std::sqrt((k + 1) / 2.0);
      const double b_cur = k > 0 ? std::sqrt(k / 2.0) : 0.0;
      const double q_next = (x * q - b_cur * q_prev) / b_next;
      q_prev = q;
      q = q_next;
      sum += q * q;
      if (std::abs(q) > 1e100) {
        q *= 0x1p-400;
        q_prev *= 0x1p-400;
        sum *= 0x1p-800;
        shift += 400;
      }
    }
    rule.weights[i] = std::exp(-(std::log(sum) + 2.0 * shift * log2));
  }
  return rule;
}

}  // namespace spectomo
