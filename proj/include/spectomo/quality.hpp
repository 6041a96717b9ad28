#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "spectomo/assignment.hpp"
#include "spectomo/ptm.hpp"

namespace spectomo {

/// Entanglement fidelity with the identity channel from the spectrum alone:
/// F_ent(S, I) = (1 + sum_i lambda_i) / d^2. The sum of a conjugate-closed
/// spectrum is real; the real part is used.
inline double fent_identity(const Eigen::VectorXcd& eigenvalues, int d) {
  if (eigenvalues.size() != static_cast<Eigen::Index>(d) * d - 1)
    throw std::invalid_argument("fent_identity: need d^2 - 1 eigenvalues");
  return (1.0 + eigenvalues.sum().real()) / (static_cast<double>(d) * d);
}

/// Average gate fidelity from entanglement fidelity: (F_ent d + 1)/(d + 1).
inline double favg_from_fent(double f_ent, int d) {
  return (f_ent * d + 1.0) / (d + 1.0);
}

/// Unitarity of a transfer matrix: mean squared singular value of the
/// traceless block; 1 exactly for unitary channels.
inline double unitarity(const PauliTransferMatrix& s) {
  const Eigen::MatrixXd t = s.traceless_block();
  return t.squaredNorm() / static_cast<double>(t.rows());
}

/// Squared norm of the affine column: 0 exactly for unital channels.
inline double unitality_s2(const PauliTransferMatrix& s) {
  return s.affine_vector().squaredNorm();
}

struct XiMaxResult {
  double value = 0.0;
  bool exact = true;  // false when the assignment relaxation was used
};

namespace detail {

inline double xi_brute_force(const Eigen::VectorXcd& eigs,
                             const Eigen::VectorXcd& ideal) {
  const Eigen::Index n = eigs.size();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    std::complex<double> sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      sum += std::conj(eigs[perm[static_cast<std::size_t>(i)]]) * ideal[i];
    best = std::max(best, std::abs(sum));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

/// Assignment relaxation: maximize Re(e^{-i theta} sum) over a theta grid;
/// each theta is a linear assignment problem. Any permutation found this way
/// realizes its own |sum|, so the result is a certified lower bound on the
/// true maximum.
inline double xi_assignment(const Eigen::VectorXcd& eigs,
                            const Eigen::VectorXcd& ideal, int theta_points) {
  const Eigen::Index n = eigs.size();
  double best = 0.0;
  for (int t = 0; t < theta_points; ++t) {
    const double theta = 2.0 * M_PI * t / theta_points;
    const std::complex<double> rot = std::exp(std::complex<double>(0.0, -theta));
    Eigen::MatrixXd cost(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        cost(i, j) = -(rot * std::conj(eigs[j]) * ideal[i]).real();
    const auto assign = min_cost_assignment(cost);
    std::complex<double> sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      sum += std::conj(eigs[assign[static_cast<std::size_t>(i)]]) * ideal[i];
    best = std::max(best, std::abs(sum));
  }
  return best / static_cast<double>(n);
}

}  // namespace detail

/// xi_max = (1/N) max over permutations pi of |sum_i conj(lambda_{pi(i)})
/// lambda_i^ideal|. Exact enumeration for N <= 8; a 64-point rotation grid
/// with linear assignment beyond that (certified lower bound).
inline XiMaxResult xi_max(const Eigen::VectorXcd& eigenvalues,
                          const Eigen::VectorXcd& ideal_eigenvalues) {
  if (eigenvalues.size() != ideal_eigenvalues.size())
    throw std::invalid_argument("xi_max: length mismatch");
  XiMaxResult result;
  if (eigenvalues.size() <= 8) {
    result.value = detail::xi_brute_force(eigenvalues, ideal_eigenvalues);
    result.exact = true;
  } else {
    result.value = detail::xi_assignment(eigenvalues, ideal_eigenvalues, 64);
    result.exact = false;
  }
  return result;
}

/// Spectral upper bound on the entanglement fidelity with the target gate:
///   F_ent <= (1 + N sqrt(u_upper - sum_j |lambda_j|^2 / N) + N xi_max)
///            / (N + 1),
/// with the square-root argument clamped at zero (rounded published inputs
/// can push it slightly negative) and the result capped at 1.
inline double fidelity_upper_bound(const Eigen::VectorXcd& eigenvalues,
                                   const Eigen::VectorXcd& ideal_eigenvalues,
                                   double u_upper, int d) {
  if (u_upper < 0.0 || u_upper > 1.0 + 1e-9)
    throw std::invalid_argument("fidelity_upper_bound: u_upper must lie in [0, 1]");
  if (eigenvalues.size() != static_cast<Eigen::Index>(d) * d - 1)
    throw std::invalid_argument("fidelity_upper_bound: need d^2 - 1 eigenvalues");
  const double n = static_cast<double>(eigenvalues.size());
  const double power_sum = eigenvalues.cwiseAbs2().sum();
  const double xi = xi_max(eigenvalues, ideal_eigenvalues).value;
  const double root_arg = std::max(u_upper - power_sum / n, 0.0);
  const double bound = (1.0 + n * std::sqrt(root_arg) + n * xi) / (n + 1.0);
  return std::min(bound, 1.0);
}

/// Spectral lower bound on unitarity: (1 + sum |lambda_i|^2 - d)/(d(d-1)),
/// floored at zero.
inline double unitarity_lower_bound(const Eigen::VectorXcd& eigenvalues, int d) {
  if (eigenvalues.size() != static_cast<Eigen::Index>(d) * d - 1)
    throw std::invalid_argument("unitarity_lower_bound: need d^2 - 1 eigenvalues");
  const double s = eigenvalues.cwiseAbs2().sum();
  return std::max((1.0 + s - d) / (d * (d - 1.0)), 0.0);
}

struct UnitarityBounds {
  double lower = 0.0;         // spectral lower bound
  double feasible_min = 0.0;  // minimum of u over the constrained set
  double upper = 1.0;         // maximum of u over the constrained set
  bool feasible = true;
};

namespace detail {

struct SingularTriple {
  double s1, s2, s3;
};

/// Feasibility of a singular-value triple against the observed moduli
/// m1 >= m2 >= m3: fixed product, descending order in [0, 1], the
/// trace-preserving cap s1 + s2 <= 1 + s3, and the weak-majorization sums.
inline bool feasible_triple(const SingularTriple& s, double m1, double m2,
                            double m3, double tol = 1e-9) {
  if (!(s.s1 <= 1.0 + tol && s.s1 >= s.s2 - tol && s.s2 >= s.s3 - tol &&
        s.s3 >= -tol))
    return false;
  if (s.s1 + s.s2 > 1.0 + s.s3 + tol) return false;
  if (s.s1 + s.s2 < m1 + m2 - tol) return false;
  if (s.s1 + s.s2 + s.s3 < m1 + m2 + m3 - tol) return false;
  return true;
}

inline double triple_u(const SingularTriple& s) {
  return (s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3) / 3.0;
}

}  // namespace detail

/// Bounds on the unitarity of a single-qubit channel from its three
/// eigenvalue moduli, via the constrained search over singular values
///   objective (s1^2 + s2^2 + s3^2)/3
///   s1 s2 s3 = |l1 l2 l3|,  1 >= s1 >= s2 >= s3 >= 0,
///   s1 + s2 <= 1 + s3,  s1 + s2 >= |l1| + |l2|,  s1 + s2 + s3 >= sum |l_i|.
/// s1 is eliminated through the product constraint; the remaining (s2, s3)
/// plane is scanned on a 1e-3 grid (with analytic boundary seeds) and the
/// best points are refined by coordinate search to 1e-6. Both the maximum
/// (the certified upper bound) and the minimum of the feasible objective
/// are reported; `lower` is the separate spectral bound.
inline UnitarityBounds unitarity_bounds_qubit(const Eigen::VectorXcd& eigenvalues) {
  if (eigenvalues.size() != 3)
    throw std::invalid_argument("unitarity_bounds_qubit: need exactly 3 eigenvalues");
  std::array<double, 3> m{std::abs(eigenvalues[0]), std::abs(eigenvalues[1]),
                          std::abs(eigenvalues[2])};
  std::sort(m.begin(), m.end(), std::greater<>());
  const double m1 = m[0], m2 = m[1], m3 = m[2];
  const double prod = m1 * m2 * m3;

  UnitarityBounds bounds;
  bounds.lower = unitarity_lower_bound(eigenvalues, 2);

  std::vector<detail::SingularTriple> candidates;
  if (prod > 1e-14) {
    constexpr double step = 1e-3;
    for (double s2 = step; s2 <= 1.0 + 1e-12; s2 += step)
      for (double s3 = step; s3 <= s2 + 1e-12; s3 += step)
        candidates.push_back({prod / (s2 * s3), s2, s3});
  } else {
    // Degenerate product: s3 = 0 and (s1, s2) scan.
    constexpr double step = 1e-3;
    for (double s1 = 0.0; s1 <= 1.0 + 1e-12; s1 += step)
      for (double s2 = 0.0; s2 <= s1 + 1e-12; s2 += step)
        candidates.push_back({s1, s2, 0.0});
  }

  // Analytic seeds: isotropic point, moduli themselves, and the boundary
  // configurations where the optimum typically sits.
  candidates.push_back({m1, m2, m3});
  if (prod > 1e-14) {
    const double iso = std::cbrt(prod);
    candidates.push_back({iso, iso, iso});
    const double r = std::sqrt(prod);
    candidates.push_back({1.0, r, r});
    const double half = (m1 + m2) / 2.0;
    if (half > 0.0)
      candidates.push_back({half, half, prod / (half * half)});
  } else {
    const double pair_sum = m1 + m2;
    candidates.push_back({std::min(pair_sum, 1.0), std::max(pair_sum - 1.0, 0.0), 0.0});
    candidates.push_back({std::min(pair_sum / 2.0, 1.0), std::min(pair_sum / 2.0, 1.0), 0.0});
  }

  bool any = false;
  detail::SingularTriple best_max{}, best_min{};
  double u_max = -1.0, u_min = 2.0;
  for (const auto& c : candidates) {
    if (!detail::feasible_triple(c, m1, m2, m3)) continue;
    const double u = detail::triple_u(c);
    any = true;
    if (u > u_max) { u_max = u; best_max = c; }
    if (u < u_min) { u_min = u; best_min = c; }
  }
  if (!any) {
    bounds.feasible = false;
    bounds.feasible_min = bounds.lower;
    bounds.upper = 1.0;
    return bounds;
  }

  // Coordinate refinement in the (s2, s3) plane (or (s1, s2) when the
  // product degenerates), halving the step down to 1e-6.
  auto refine = [&](detail::SingularTriple start, bool maximize) {
    detail::SingularTriple cur = start;
    double best = detail::triple_u(cur);
    for (double step = 5e-4; step >= 1e-6; step /= 2.0) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (const auto& delta :
             {std::array<double, 2>{step, 0.0}, std::array<double, 2>{-step, 0.0},
              std::array<double, 2>{0.0, step}, std::array<double, 2>{0.0, -step}}) {
          detail::SingularTriple next = cur;
          if (prod > 1e-14) {
            next.s2 = cur.s2 + delta[0];
            next.s3 = cur.s3 + delta[1];
            if (next.s2 <= 0.0 || next.s3 <= 0.0) continue;
            next.s1 = prod / (next.s2 * next.s3);
          } else {
            next.s1 = cur.s1 + delta[0];
            next.s2 = cur.s2 + delta[1];
            next.s3 = 0.0;
          }
          if (!detail::feasible_triple(next, m1, m2, m3)) continue;
          const double u = detail::triple_u(next);
          if (maximize ? u > best + 1e-15 : u < best - 1e-15) {
            best = u;
            cur = next;
            improved = true;
          }
        }
      }
    }
    return best;
  };

  bounds.upper = std::min(refine(best_max, true), 1.0);
  bounds.feasible_min = std::max(refine(best_min, false), 0.0);
  return bounds;
}

/// Spectral bound on the non-unitality of a single-qubit channel:
///   |s|^2 <= 1 - |l1|^2 - |l2|^2 - |l3|^2 + 2 Re(l1 l2 l3).
/// Returned unclamped; a negative value means no trace-preserving qubit
/// channel has this spectrum.
inline double unitality_bound_qubit(const Eigen::VectorXcd& eigenvalues) {
  if (eigenvalues.size() != 3)
    throw std::invalid_argument("unitality_bound_qubit: need exactly 3 eigenvalues");
  const double sumsq = eigenvalues.cwiseAbs2().sum();
  const std::complex<double> triple =
      eigenvalues[0] * eigenvalues[1] * eigenvalues[2];
  return 1.0 - sumsq + 2.0 * triple.real();
}

/// Everything the spectrum says about gate quality, bundled. The headline
/// fidelity bounds are evaluated at both ends of the feasible unitarity
/// range; the `upper`-end variants are the certified bounds.
struct QualityReport {
  int d = 2;
  Eigen::VectorXcd eigenvalues;
  Eigen::VectorXcd ideal_eigenvalues;
  double xi = 0.0;
  bool xi_exact = true;
  double u_lower = 0.0;
  double u_upper = 1.0;
  double u_feasible_min = 0.0;
  double f_ent_upper = 1.0;            // at the feasible-minimum unitarity
  double f_avg_upper = 1.0;
  double f_ent_upper_conservative = 1.0;  // at the certified upper unitarity
  double f_avg_upper_conservative = 1.0;
  double f_ent_upper_corollary = 1.0;     // with u = 1
  std::optional<double> unitality_s2_upper;  // single-qubit only
  bool unitality_complex_flagged = false;
  bool feasible = true;
};

inline QualityReport build_quality_report(const Eigen::VectorXcd& eigenvalues,
                                          const Eigen::VectorXcd& ideal_eigenvalues,
                                          int d) {
  QualityReport report;
  report.d = d;
  report.eigenvalues = eigenvalues;
  report.ideal_eigenvalues = ideal_eigenvalues;

  const XiMaxResult xi = xi_max(eigenvalues, ideal_eigenvalues);
  report.xi = xi.value;
  report.xi_exact = xi.exact;
  report.u_lower = unitarity_lower_bound(eigenvalues, d);
  if (d == 2) {
    const UnitarityBounds ub = unitarity_bounds_qubit(eigenvalues);
    report.u_upper = ub.upper;
    report.u_feasible_min = ub.feasible_min;
    report.feasible = ub.feasible;
  } else {
    report.u_upper = 1.0;
    report.u_feasible_min = report.u_lower;
  }

  report.f_ent_upper = fidelity_upper_bound(eigenvalues, ideal_eigenvalues,
                                            report.u_feasible_min, d);
  report.f_avg_upper = favg_from_fent(report.f_ent_upper, d);
  report.f_ent_upper_conservative =
      fidelity_upper_bound(eigenvalues, ideal_eigenvalues, report.u_upper, d);
  report.f_avg_upper_conservative =
      favg_from_fent(report.f_ent_upper_conservative, d);
  report.f_ent_upper_corollary =
      fidelity_upper_bound(eigenvalues, ideal_eigenvalues, 1.0, d);

  if (d == 2) {
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
      if (std::abs(eigenvalues[i].imag()) > 1e-9)
        report.unitality_complex_flagged = true;
    const double raw = unitality_bound_qubit(eigenvalues);
    if (raw < -1e-9) report.feasible = false;
    report.unitality_s2_upper = std::clamp(raw, 0.0, 1.0);
  }
  return report;
}

/// Entanglement fidelity of a channel with a target unitary's transfer
/// matrix: (1 + Tr[T_U^T T_S]) / d^2.
inline double entanglement_fidelity(const PauliTransferMatrix& channel,
                                    const PauliTransferMatrix& target_unitary) {
  const Eigen::MatrixXd ts = channel.traceless_block();
  const Eigen::MatrixXd tu = target_unitary.traceless_block();
  if (ts.rows() != tu.rows())
    throw std::invalid_argument("entanglement_fidelity: dimension mismatch");
  const double dd = static_cast<double>(channel.dim) * channel.dim;
  return (1.0 + (tu.transpose() * ts).trace()) / dd;
}

}  // namespace spectomo
