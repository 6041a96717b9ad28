#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spectomo/assignment.hpp"
#include "spectomo/pencil.hpp"
#include "spectomo/random.hpp"
#include "spectomo/signal.hpp"

namespace spectomo {

struct EigenvalueCI {
  std::complex<double> point;
  std::array<double, 2> re_interval{0.0, 0.0};
  std::array<double, 2> im_interval{0.0, 0.0};
  double confidence = 0.95;
  int replicates = 0;
};

struct BootstrapResult {
  PencilFit point_fit;
  std::vector<EigenvalueCI> intervals;
  int requested_replicates = 0;
  int failed_replicates = 0;
  int loose_matches = 0;   // replicates where some matched distance exceeded 0.5
  bool excessive_failures = false;
};

namespace detail {

inline double percentile(std::vector<double>& sorted_values, double q) {
  const std::size_t n = sorted_values.size();
  if (n == 1) return sorted_values[0];
  const double pos = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

}  // namespace detail

/// Wild bootstrap confidence intervals for pencil eigenvalue estimates.
/// The signal is fit once; each replicate resamples
///   g*(k) = g_est(k) + r(k) v_k,  v_k iid standard Gaussian,
/// refits, and matches replicate eigenvalues to the point estimates by
/// minimum-distance assignment. Percentile intervals are reported for real
/// and imaginary parts separately.
inline BootstrapResult wild_bootstrap_ci(const SpectralSignal& g,
                                         const PencilConfig& config,
                                         int replicates, double confidence,
                                         std::uint64_t seed) {
  if (replicates < 100)
    throw std::invalid_argument("wild_bootstrap_ci: need at least 100 replicates");
  if (confidence <= 0.0 || confidence >= 1.0)
    throw std::invalid_argument("wild_bootstrap_ci: confidence must be in (0, 1)");

  BootstrapResult result;
  result.requested_replicates = replicates;
  result.point_fit = pencil_fit(g.values, config);
  const Eigen::Index n = result.point_fit.eigenvalues.size();
  const Eigen::Index len = g.values.size();

  const Eigen::VectorXd g_est =
      reconstruct_signal(result.point_fit.eigenvalues,
                         result.point_fit.amplitudes, len)
          .real();
  const Eigen::VectorXd residual = g.values - g_est;

  std::vector<std::vector<double>> re_samples(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> im_samples(static_cast<std::size_t>(n));

  for (int b = 0; b < replicates; ++b) {
    auto stream = RandomStream::keyed(seed, static_cast<std::uint64_t>(b));
    Eigen::VectorXd resampled(len);
    for (Eigen::Index k = 0; k < len; ++k)
      resampled[k] = g_est[k] + residual[k] * stream.gaussian();
    try {
      const Eigen::VectorXcd est = pencil_eigs(resampled, config);
      const auto assign = match_eigenvalues(result.point_fit.eigenvalues, est);
      bool loose = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> matched = est[assign[static_cast<std::size_t>(i)]];
        if (std::abs(matched - result.point_fit.eigenvalues[i]) > 0.5) loose = true;
        re_samples[static_cast<std::size_t>(i)].push_back(matched.real());
        im_samples[static_cast<std::size_t>(i)].push_back(matched.imag());
      }
      if (loose) ++result.loose_matches;
    } catch (const UnderdeterminedOrder&) {
      ++result.failed_replicates;
    }
  }

  result.excessive_failures =
      result.failed_replicates > replicates / 20;

  const double lo_q = (1.0 - confidence) / 2.0;
  const double hi_q = 1.0 - lo_q;
  for (Eigen::Index i = 0; i < n; ++i) {
    EigenvalueCI ci;
    ci.point = result.point_fit.eigenvalues[i];
    ci.confidence = confidence;
    ci.replicates = static_cast<int>(re_samples[static_cast<std::size_t>(i)].size());
    auto& re = re_samples[static_cast<std::size_t>(i)];
    auto& im = im_samples[static_cast<std::size_t>(i)];
    if (!re.empty()) {
      std::sort(re.begin(), re.end());
      std::sort(im.begin(), im.end());
      ci.re_interval = {detail::percentile(re, lo_q), detail::percentile(re, hi_q)};
      ci.im_interval = {detail::percentile(im, lo_q), detail::percentile(im, hi_q)};
    }
    result.intervals.push_back(ci);
  }
  return result;
}

}  // namespace spectomo
