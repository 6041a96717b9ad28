#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spectomo {

/// Eigenvalues of a real transfer-matrix block together with structure
/// diagnostics. Complex eigenvalues of a real matrix come in conjugate
/// pairs; `conjugate_partner[i]` is the index of i's partner (or i itself
/// for eigenvalues that are real within tolerance). `pairing_complete` is
/// false when some clearly complex eigenvalue found no partner, which
/// signals numerical trouble upstream.
struct Spectrum {
  Eigen::VectorXcd eigenvalues;
  bool diagonalizable = true;
  std::vector<Eigen::Index> conjugate_partner;
  bool pairing_complete = true;
  double eigenvector_condition = 1.0;
};

namespace detail {

inline void match_conjugate_pairs(Spectrum& spec, double tol) {
  const Eigen::Index n = spec.eigenvalues.size();
  spec.conjugate_partner.assign(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    const std::complex<double> li = spec.eigenvalues[i];
    if (std::abs(li.imag()) <= tol) {
      spec.conjugate_partner[static_cast<std::size_t>(i)] = i;
      used[static_cast<std::size_t>(i)] = true;
      continue;
    }
    Eigen::Index best = -1;
    double best_dist = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || used[static_cast<std::size_t>(j)]) continue;
      const double dist = std::abs(spec.eigenvalues[j] - std::conj(li));
      if (dist <= best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best >= 0) {
      spec.conjugate_partner[static_cast<std::size_t>(i)] = best;
      spec.conjugate_partner[static_cast<std::size_t>(best)] = i;
      used[static_cast<std::size_t>(i)] = true;
      used[static_cast<std::size_t>(best)] = true;
    } else {
      spec.pairing_complete = false;
      used[static_cast<std::size_t>(i)] = true;
    }
  }
}

/// A cluster of nearly equal eigenvalues whose eigenvectors are nearly
/// parallel indicates a defective (Jordan) block that the plain condition
/// number can miss at machine precision.
inline bool has_defective_cluster(const Eigen::VectorXcd& eigenvalues,
                                  const Eigen::MatrixXcd& vectors) {
  const Eigen::Index n = eigenvalues.size();
  const double scale = std::max(eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  const double eig_tol = 1e-6 * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(eigenvalues[i] - eigenvalues[j]) > eig_tol) continue;
      Eigen::MatrixXcd pair(vectors.rows(), 2);
      pair.col(0) = vectors.col(i).normalized();
      pair.col(1) = vectors.col(j).normalized();
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pair);
      if (svd.singularValues()(1) < 1e-3) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Full eigenvalue set of a real square matrix via Eigen's dense
/// nonsymmetric solver (Hessenberg reduction + shifted QR iteration).
/// Flags the matrix non-diagonalizable when the eigenvector matrix has
/// condition number above 1e8 or a defective eigenvalue cluster is found.
inline Spectrum spectrum(const Eigen::Ref<const Eigen::MatrixXd>& t,
                         double pair_tol = 1e-8) {
  if (t.rows() != t.cols())
    throw std::invalid_argument("spectrum: matrix must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(t, true);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigensolver failed to converge");

  Spectrum spec;
  spec.eigenvalues = solver.eigenvalues();

  const Eigen::MatrixXcd v = solver.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  spec.eigenvector_condition =
      smin > 0 ? svd.singularValues()(0) / smin
               : std::numeric_limits<double>::infinity();
  spec.diagonalizable =
      spec.eigenvector_condition <= 1e8 &&
      !detail::has_defective_cluster(spec.eigenvalues, v);

  detail::match_conjugate_pairs(spec, pair_tol);
  return spec;
}

/// A real matrix of odd dimension must have at least one real eigenvalue.
/// When the gate's traceless block has odd dimension (any qubit system:
/// 4^n - 1), a fitted spectrum whose members are all clearly complex cannot
/// come from repeated applications of one trace-preserving map, however many
/// eigenvalues the fit resolved.
inline bool spectrum_tpcp_compatible(const Eigen::VectorXcd& eigenvalues,
                                     Eigen::Index full_block_dim,
                                     double real_tol = 1e-6) {
  if (full_block_dim % 2 == 0) return true;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues[i].imag()) <= real_tol) return true;
  return false;
}

/// Sort eigenvalues by descending modulus, breaking ties by phase.
inline Eigen::VectorXcd sorted_by_modulus(const Eigen::VectorXcd& values) {
  std::vector<std::complex<double>> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return std::arg(a) < std::arg(b);
  });
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace spectomo
