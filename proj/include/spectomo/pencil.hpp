#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "spectomo/spectrum.hpp"
#include "spectomo/stats.hpp"

namespace spectomo {

/// Thrown when the rank-N truncation is not supported by the data
/// (sigma_N below 1e-14 sigma_1): the requested model order exceeds the
/// numerical spectral content of the signal.
struct UnderdeterminedOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Matrix-pencil configuration. The pencil can expose N eigenvalues only
/// when N <= L and K - L >= N - 1; the default pencil parameter is
/// L = floor(K/2), the middle of the flat accuracy region.
struct PencilConfig {
  int model_order = 1;   // N
  int pencil_param = 1;  // L
  int max_index = 0;     // K

  static PencilConfig with_default_pencil(int model_order, int max_index) {
    return {model_order, max_index / 2, max_index};
  }

  void validate() const {
    if (model_order < 1)
      throw std::invalid_argument("PencilConfig: N must be >= 1");
    if (pencil_param < model_order)
      throw std::invalid_argument("PencilConfig: L must be >= N");
    if (max_index - pencil_param < model_order - 1)
      throw std::invalid_argument("PencilConfig: need K - L >= N - 1");
  }
};

struct PencilFit {
  Eigen::VectorXcd eigenvalues;  // sorted by descending modulus, then phase
  Eigen::VectorXcd amplitudes;
  double rms = 0.0;
  PencilConfig config;
  bool near_duplicate_eigenvalues = false;
};

/// Hankel data matrix Y of size (K-L+1) x (L+1) with Y(r, c) = g(r + c).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
hankel(const Eigen::MatrixBase<Derived>& g, Eigen::Index pencil_param) {
  const Eigen::Index k_max = g.size() - 1;
  if (pencil_param < 1 || pencil_param > k_max - 1)
    throw std::invalid_argument("hankel: L must lie in [1, K-1]");
  const Eigen::Index rows = k_max - pencil_param + 1;
  const Eigen::Index cols = pencil_param + 1;
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> y(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      y(r, c) = g(r + c);
  return y;
}

/// Matrix-pencil eigenvalue estimates:
///   1. SVD of the Hankel matrix Y, keeping the N largest singular values
///      to form the denoised Y_clean;
///   2. G0 = Y_clean without its last column, G1 without its first;
///   3. the time-shift operator G1 G0^+ with the pseudo-inverse taken from
///      the rank-N factors;
///   4. its N nonzero eigenvalues, largest modulus first.
/// The shift operator is evaluated through its N x N compression
/// U_N^T (G1 G0^+) U_N, which carries exactly the nonzero spectrum.
inline Eigen::VectorXcd pencil_eigs(const Eigen::VectorXd& g,
                                    const PencilConfig& config) {
  config.validate();
  if (g.size() != config.max_index + 1)
    throw std::invalid_argument("pencil_eigs: signal length does not match K");
  const Eigen::Index n = config.model_order;

  const Eigen::MatrixXd y = hankel(g, config.pencil_param);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() < n || sv(n - 1) < 1e-14 * sv(0))
    throw UnderdeterminedOrder(
        "pencil_eigs: singular value " + std::to_string(n) +
        " is below 1e-14 of the largest; model order is under-determined");

  const Eigen::MatrixXd vn = svd.matrixV().leftCols(n);   // (L+1) x N
  const Eigen::VectorXd sn = sv.head(n);
  const Eigen::Index l = config.pencil_param;
  // G0 = U_N S_N V_N(0:L-1, :)^T and G1 = U_N S_N V_N(1:L, :)^T.
  const Eigen::MatrixXd z0 = sn.asDiagonal() * vn.topRows(l).transpose();     // N x L
  const Eigen::MatrixXd z1 = sn.asDiagonal() * vn.bottomRows(l).transpose();  // N x L

  Eigen::JacobiSVD<Eigen::MatrixXd> svd0(z0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s0 = svd0.singularValues();
  if (s0(n - 1) < 1e-14 * std::max(s0(0), sv(0)))
    throw UnderdeterminedOrder("pencil_eigs: shift submatrix is rank deficient");
  const Eigen::MatrixXd shift = z1 * svd0.matrixV() *
                                s0.cwiseInverse().asDiagonal() *
                                svd0.matrixU().transpose();  // N x N

  Eigen::EigenSolver<Eigen::MatrixXd> es(shift, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("pencil_eigs: eigensolver failed to converge");
  return sorted_by_modulus(es.eigenvalues());
}

/// Least-squares amplitudes for fixed eigenvalues: minimizes
/// sum_k |g(k) - sum_j A_j lambda_j^k|^2 over the complex A, and the rms
/// reconstruction error sqrt(mean |g - g_est|^2).
inline PencilFit fit_amplitudes(const Eigen::VectorXd& g,
                                const Eigen::VectorXcd& eigenvalues,
                                PencilConfig config = {}) {
  const Eigen::Index n = eigenvalues.size();
  const Eigen::Index rows = g.size();
  if (rows < n)
    throw std::invalid_argument("fit_amplitudes: need K + 1 >= N");

  PencilFit fit;
  fit.config = config;
  fit.eigenvalues = eigenvalues;
  for (Eigen::Index i = 0; i < n && !fit.near_duplicate_eigenvalues; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(eigenvalues[i] - eigenvalues[j]) < 1e-12) {
        fit.near_duplicate_eigenvalues = true;
        break;
      }

  Eigen::MatrixXcd vander(rows, n);
  vander.row(0).setOnes();
  for (Eigen::Index k = 1; k < rows; ++k)
    vander.row(k) = vander.row(k - 1).cwiseProduct(eigenvalues.transpose());

  const Eigen::VectorXcd rhs = g.cast<std::complex<double>>();
  // SVD solve handles the near-duplicate (rank-deficient) case as a
  // pseudo-inverse solution.
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(vander,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  fit.amplitudes = svd.solve(rhs);
  const Eigen::VectorXcd residual = rhs - vander * fit.amplitudes;
  fit.rms = std::sqrt(residual.squaredNorm() / static_cast<double>(rows));
  return fit;
}

/// Eigenvalues and amplitudes in one pass.
inline PencilFit pencil_fit(const Eigen::VectorXd& g, const PencilConfig& config) {
  PencilFit fit = fit_amplitudes(g, pencil_eigs(g, config), config);
  return fit;
}

/// g_est(k) = sum_j A_j lambda_j^k for k = 0..len-1.
inline Eigen::VectorXcd reconstruct_signal(const Eigen::VectorXcd& eigenvalues,
                                           const Eigen::VectorXcd& amplitudes,
                                           Eigen::Index len) {
  Eigen::VectorXcd out(len);
  Eigen::VectorXcd powers = Eigen::VectorXcd::Ones(eigenvalues.size());
  for (Eigen::Index k = 0; k < len; ++k) {
    out[k] = (powers.array() * amplitudes.array()).sum();
    powers = powers.cwiseProduct(eigenvalues);
  }
  return out;
}

struct ModelSelection {
  int selected = 0;
  double alpha = 0.05;
  int n_min = 0;
  int n_max = 0;
  std::map<int, PencilFit> fits;          // absent where under-determined
  std::vector<double> p_values;           // comparison N vs N+1, N = n_min..n_max-1
  std::string method = "consecutive-f-test-4-params-per-eigenvalue";
};

/// Nested F-test model-order scan. Each consecutive pair (N, N+1) is
/// compared with
///   F = ((RSS_N - RSS_{N+1}) / 4) / (RSS_{N+1} / (K + 1 - 4(N + 1))),
/// counting 4 real parameters per eigenvalue (complex lambda and complex
/// amplitude). The selected order is the smallest N after which no
/// consecutive comparison is significant at level alpha. Comparisons whose
/// residual degrees of freedom are nonpositive, or where both residuals sit
/// at the numerical noise floor, count as insignificant.
inline ModelSelection select_model_order(const Eigen::VectorXd& g, int pencil_param,
                                         int n_min, int n_max, double alpha) {
  const int k_max = static_cast<int>(g.size()) - 1;
  if (n_min < 1 || n_max < n_min)
    throw std::invalid_argument("select_model_order: bad order range");
  if (n_max > pencil_param || n_max > k_max - pencil_param + 1)
    throw std::invalid_argument("select_model_order: N_max exceeds pencil limits");
  if (k_max + 1 - 4 * (n_min + 1) <= 0)
    throw std::invalid_argument(
        "select_model_order: nonpositive residual degrees of freedom at N_min");

  ModelSelection sel;
  sel.alpha = alpha;
  sel.n_min = n_min;
  sel.n_max = n_max;

  std::map<int, double> rss;
  for (int n = n_min; n <= n_max; ++n) {
    try {
      PencilFit fit = pencil_fit(g, PencilConfig{n, pencil_param, k_max});
      rss[n] = fit.rms * fit.rms * static_cast<double>(k_max + 1);
      sel.fits.emplace(n, std::move(fit));
    } catch (const UnderdeterminedOrder&) {
      // Order exceeds the numerical content; treated as no improvement.
    }
  }

  const double scale = g.cwiseAbs().maxCoeff();
  const double floor = 1e-24 * scale * scale * static_cast<double>(k_max + 1);
  sel.p_values.assign(static_cast<std::size_t>(n_max - n_min), 1.0);
  for (int n = n_min; n < n_max; ++n) {
    const auto small = rss.find(n), big = rss.find(n + 1);
    if (small == rss.end() || big == rss.end()) continue;
    const double dof = k_max + 1 - 4.0 * (n + 1);
    if (dof <= 0.0) continue;
    if (big->second <= floor && small->second <= floor) continue;
    const double f_stat =
        std::max((small->second - big->second) / 4.0, 0.0) /
        std::max(big->second / dof, 1e-300);
    sel.p_values[static_cast<std::size_t>(n - n_min)] = 1.0 - f_cdf(f_stat, 4.0, dof);
  }

  sel.selected = n_max;
  for (int n = n_min; n <= n_max; ++n) {
    bool quiet = true;
    for (int m = n; m < n_max && quiet; ++m)
      quiet = sel.p_values[static_cast<std::size_t>(m - n_min)] >= alpha;
    if (quiet && sel.fits.count(n)) {
      sel.selected = n;
      break;
    }
  }
  return sel;
}

}  // namespace spectomo
