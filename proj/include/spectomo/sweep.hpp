#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spectomo/assignment.hpp"
#include "spectomo/pencil.hpp"
#include "spectomo/ptm.hpp"
#include "spectomo/signal.hpp"
#include "spectomo/spectrum.hpp"

namespace spectomo {

struct SweepPoint {
  int max_index = 0;       // K
  int pencil_param = 0;    // L
  double n_samples = 0.0;
  int trials = 0;
  int failed_trials = 0;
  double mean_delta_sq = 0.0;
};

/// Accuracy study of the pencil estimator: for each (K, L) pair, generate
/// `trials` noisy signals of the channel (Gaussian surrogate noise with
/// standard deviation 1/sqrt(n_samples)), fit at the channel's full model
/// order, and average the matched mean squared eigenvalue error
/// Delta^2 = (1/N) sum_j |lambda_j - lambda_j^est|^2.
inline std::vector<SweepPoint> accuracy_sweep(const PauliTransferMatrix& channel,
                                              const std::vector<int>& k_list,
                                              const std::vector<int>& l_list,
                                              double n_samples, int trials,
                                              std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("accuracy_sweep: trials must be >= 1");
  const Eigen::MatrixXd t = channel.traceless_block();
  const Eigen::VectorXcd truth = spectrum(t).eigenvalues;
  const int order = static_cast<int>(truth.size());

  std::vector<SweepPoint> table;
  for (const int k_max : k_list) {
    const SpectralSignal exact = signal_nospam(t, k_max);
    for (const int l : l_list) {
      if (l < order || k_max - l < order - 1) continue;
      SweepPoint point{k_max, l, n_samples, trials, 0, 0.0};
      double total = 0.0;
      int ok = 0;
      for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed =
            RandomStream::derive(seed, static_cast<std::uint64_t>(k_max),
                                 static_cast<std::uint64_t>(l),
                                 static_cast<std::uint64_t>(trial));
        const SpectralSignal noisy = add_shot_noise(exact, n_samples, trial_seed);
        try {
          const Eigen::VectorXcd est =
              pencil_eigs(noisy.values, PencilConfig{order, l, k_max});
          total += matched_squared_error(truth, est);
          ++ok;
        } catch (const UnderdeterminedOrder&) {
          ++point.failed_trials;
        }
      }
      point.mean_delta_sq = ok > 0 ? total / ok : 0.0;
      table.push_back(point);
    }
  }
  return table;
}

}  // namespace spectomo
