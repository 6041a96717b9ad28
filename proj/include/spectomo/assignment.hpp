#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace spectomo {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials, shortest augmenting paths). Returns the column assigned
/// to each row.
inline std::vector<Eigen::Index> min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols())
    throw std::invalid_argument("min_cost_assignment: cost matrix must be square");
  const Eigen::Index n = cost.rows();
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based arrays; column 0 is the virtual start column.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<Eigen::Index> match(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Eigen::Index> way(static_cast<std::size_t>(n) + 1, 0);

  for (Eigen::Index row = 1; row <= n; ++row) {
    match[0] = row;
    Eigen::Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const Eigen::Index i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const Eigen::Index j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Eigen::Index> row_to_col(static_cast<std::size_t>(n), -1);
  for (Eigen::Index j = 1; j <= n; ++j)
    row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
  return row_to_col;
}

/// Pair eigenvalue estimates with reference values by minimum total squared
/// distance; returns the column index matched to each reference entry.
inline std::vector<Eigen::Index> match_eigenvalues(const Eigen::VectorXcd& reference,
                                                   const Eigen::VectorXcd& estimate) {
  if (reference.size() != estimate.size())
    throw std::invalid_argument("match_eigenvalues: size mismatch");
  const Eigen::Index n = reference.size();
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cost(i, j) = std::norm(reference[i] - estimate[j]);
  return min_cost_assignment(cost);
}

/// Mean squared eigenvalue error after optimal matching:
/// (1/N) sum_j |lambda_j - lambda_j^est|^2.
inline double matched_squared_error(const Eigen::VectorXcd& reference,
                                    const Eigen::VectorXcd& estimate) {
  const auto assign = match_eigenvalues(reference, estimate);
  double total = 0.0;
  for (Eigen::Index i = 0; i < reference.size(); ++i)
    total += std::norm(reference[i] - estimate[assign[static_cast<std::size_t>(i)]]);
  return total / static_cast<double>(reference.size());
}

}  // namespace spectomo
