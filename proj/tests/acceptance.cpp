// Acceptance suite: one line per criterion, each pinned to its stated
// tolerance. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <spectomo/assignment.hpp>
#include <spectomo/bootstrap.hpp>
#include <spectomo/channels.hpp>
#include <spectomo/lindblad.hpp>
#include <spectomo/nonmarkov.hpp>
#include <spectomo/pencil.hpp>
#include <spectomo/quality.hpp>
#include <spectomo/random.hpp>
#include <spectomo/signal.hpp>
#include <spectomo/spectrum.hpp>
#include <spectomo/stats.hpp>
#include <spectomo/sweep.hpp>

using namespace spectomo;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
  std::string name;
  std::function<bool(std::string&)> body;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

PauliTransferMatrix random_diagonalizable_channel(RandomStream& rng) {
  const OperatorBasis basis = pauli_basis(1);
  for (;;) {
    const auto channel = ptm_from_kraus(random_kraus(2, 4, rng), basis);
    if (spectrum(channel.traceless_block()).diagonalizable) return channel;
  }
}

Eigen::VectorXcd rx_ideal_eigs(double theta) {
  Eigen::VectorXcd v(3);
  v << std::complex<double>(1.0, 0.0), std::polar(1.0, theta),
      std::polar(1.0, -theta);
  return v;
}

// --- criterion 1 -----------------------------------------------------------

bool exact_recovery(std::string& detail) {
  const auto start = Clock::now();
  RandomStream rng(20260809);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto channel = random_diagonalizable_channel(rng);
    const Eigen::MatrixXd t = channel.traceless_block();
    const Eigen::VectorXcd truth = spectrum(t).eigenvalues;
    const auto g = signal_nospam(t, 10);
    const auto est = pencil_eigs(g.values, PencilConfig{3, 5, 10});
    const auto assign = match_eigenvalues(truth, est);
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst,
                       std::abs(truth[i] - est[assign[static_cast<std::size_t>(i)]]));
  }
  const double elapsed = seconds_since(start);
  char buffer[128];
  std::snprintf(buffer, sizeof buffer, "max error %.2e, %.2f s", worst, elapsed);
  detail = buffer;
  return worst < 1e-9 && elapsed < 5.0;
}

// --- criterion 2 -----------------------------------------------------------

bool channel_spectra(std::string& detail) {
  double worst = 0.0;
  for (const double p : {0.05, 0.19, 0.4, 0.75}) {
    {
      const auto spec = spectrum(depolarizing_channel(1, p).traceless_block());
      Eigen::VectorXcd expected = Eigen::VectorXcd::Constant(3, 1.0 - p);
      worst = std::max(worst, std::sqrt(matched_squared_error(expected,
                                                              spec.eigenvalues)));
    }
    {
      const auto spec = spectrum(amplitude_damping_channel(p).traceless_block());
      Eigen::VectorXcd expected(3);
      expected << std::sqrt(1 - p), std::sqrt(1 - p), 1 - p;
      worst = std::max(worst, std::sqrt(matched_squared_error(expected,
                                                              spec.eigenvalues)));
    }
  }
  detail = "max spectral deviation " + std::to_string(worst);
  return worst < 1e-10;
}

// --- criterion 3 -----------------------------------------------------------

bool lindblad_cases(std::string& detail) {
  double worst = 0.0;
  const double tau = 1.0;

  // Case 1: pure decay.
  {
    LindbladParams p;
    p.gamma1 = 0.1;
    p.gamma_phi = 0.15;  // gamma2 = 0.2
    const auto spec = spectrum(lindblad_evolve(p, tau).traceless_block());
    Eigen::VectorXcd expected(3);
    expected << std::exp(-0.2), std::exp(-0.2), std::exp(-0.1);
    worst = std::max(worst,
                     std::sqrt(matched_squared_error(expected, spec.eigenvalues)));
  }
  // Case 2: Z drive adds phases.
  {
    LindbladParams p;
    p.gamma1 = 0.1;
    p.gamma_phi = 0.15;
    p.hz = 1.0;
    const auto spec = spectrum(lindblad_evolve(p, tau).traceless_block());
    Eigen::VectorXcd expected(3);
    expected << std::exp(-0.2) * std::polar(1.0, 1.0),
        std::exp(-0.2) * std::polar(1.0, -1.0), std::exp(-0.1);
    worst = std::max(worst,
                     std::sqrt(matched_squared_error(expected, spec.eigenvalues)));
  }
  // Case 3 across the damping transition. A defective pair's individual
  // eigenvalues carry an inherent sqrt(machine-eps) split, so the spectra
  // are compared through their first power sums, which stay well
  // conditioned through the critical point; away from it the direct
  // matched comparison is used as well.
  LindbladParams base;
  base.gamma1 = 0.3;
  base.gamma_phi = 0.05;  // gamma2 = 0.2, critical h_x = 0.05
  for (const double hx : {0.02, 0.049, 0.05, 0.051, 0.2}) {
    LindbladParams p = base;
    p.hx = hx;
    const auto evolved = lindblad_evolve(p, tau);
    const auto omegas = case3_eigenvalues(p.gamma1, p.gamma2(), hx);
    Eigen::VectorXcd expected(3);
    for (int j = 0; j < 3; ++j) expected[j] = std::exp(tau * omegas[j]);
    const auto spec = spectrum(evolved.traceless_block());
    for (int m = 1; m <= 3; ++m) {
      std::complex<double> got = 0.0, want = 0.0;
      for (int j = 0; j < 3; ++j) {
        got += std::pow(spec.eigenvalues[j], m);
        want += std::pow(expected[j], m);
      }
      worst = std::max(worst, std::abs(got - want));
    }
    if (hx != 0.05)
      worst = std::max(
          worst, std::sqrt(matched_squared_error(expected, spec.eigenvalues)));
  }

  // Critical damping: flag triggers and the signal is still two exponentials.
  LindbladParams critical = base;
  critical.hx = 0.05;
  const auto evolved = lindblad_evolve(critical, tau);
  const bool flagged = !spectrum(evolved.traceless_block()).diagonalizable;
  const auto g = signal_nospam(evolved.traceless_block(), 30);
  const auto fit = pencil_fit(g.values, PencilConfig{2, 15, 30});

  char buffer[160];
  std::snprintf(buffer, sizeof buffer,
                "max closed-form deviation %.2e, critical flag %d, rms %.2e",
                worst, flagged ? 1 : 0, fit.rms);
  detail = buffer;
  return worst < 1e-10 && flagged && fit.rms < 1e-9;
}

// --- criterion 4 -----------------------------------------------------------

bool accuracy_study(std::string& detail) {
  const auto start = Clock::now();
  RandomStream rng(7);
  const auto channel = ptm_from_kraus(random_kraus(2, 4, rng), pauli_basis(1));

  std::vector<int> l_values;
  for (int l = 15; l <= 35; ++l) l_values.push_back(l);
  const auto table = accuracy_sweep(channel, {50}, l_values, 1000, 50, 101);
  double lo = 1e300, hi = 0.0;
  for (const auto& point : table) {
    lo = std::min(lo, point.mean_delta_sq);
    hi = std::max(hi, point.mean_delta_sq);
  }
  const double spread = hi / lo;

  // Paired per-trial comparison of 1000 vs 5000 samples at L = K/2.
  const Eigen::MatrixXd t = channel.traceless_block();
  const Eigen::VectorXcd truth = spectrum(t).eigenvalues;
  const auto exact = signal_nospam(t, 50);
  const int trials = 50;
  Eigen::VectorXd diff(trials);
  double mean1000 = 0.0, mean5000 = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const auto g1 = add_shot_noise(exact, 1000, RandomStream::derive(55, 1, trial));
    const auto g5 = add_shot_noise(exact, 5000, RandomStream::derive(55, 5, trial));
    const double d1 = matched_squared_error(
        truth, pencil_eigs(g1.values, PencilConfig{3, 25, 50}));
    const double d5 = matched_squared_error(
        truth, pencil_eigs(g5.values, PencilConfig{3, 25, 50}));
    diff[trial] = d1 - d5;
    mean1000 += d1 / trials;
    mean5000 += d5 / trials;
  }
  const double mean = diff.mean();
  const double sd = std::sqrt((diff.array() - mean).square().sum() / (trials - 1));
  const double t_stat = mean / (sd / std::sqrt(static_cast<double>(trials)));
  const double p_value = 1.0 - student_t_cdf(t_stat, trials - 1);
  const double elapsed = seconds_since(start);

  char buffer[200];
  std::snprintf(buffer, sizeof buffer,
                "L spread %.2fx, mean D2 %.3g vs %.3g, one-sided p %.2e, %.1f s",
                spread, mean1000, mean5000, p_value, elapsed);
  detail = buffer;
  return spread < 3.0 && mean5000 < mean1000 && p_value < 0.05 && elapsed < 120.0;
}

// --- criterion 5 -----------------------------------------------------------

bool published_bounds(std::string& detail) {
  Eigen::VectorXcd qi(3);
  qi << std::complex<double>(0.691, 0.719), std::complex<double>(0.691, -0.719),
      std::complex<double>(0.997, 0.0);
  Eigen::VectorXcd ibm(3);
  ibm << std::complex<double>(0.735, 0.671), std::complex<double>(0.735, -0.671),
      std::complex<double>(0.996, 0.0);
  const auto ideal = rx_ideal_eigs(M_PI / 4);

  const auto qi_report = build_quality_report(qi, ideal, 2);
  const auto ibm_report = build_quality_report(ibm, ideal, 2);

  char buffer[240];
  std::snprintf(buffer, sizeof buffer,
                "QI F<=%.4f u=[%.4f,%.4f]; IBM F<=%.4f u=[%.4f,%.4f]",
                qi_report.f_avg_upper, qi_report.u_lower, qi_report.u_upper,
                ibm_report.f_avg_upper, ibm_report.u_lower, ibm_report.u_upper);
  detail = buffer;

  return std::abs(qi_report.f_avg_upper - 0.999) < 0.001 &&
         std::abs(qi_report.u_lower - 0.994) < 0.005 &&
         std::abs(qi_report.u_upper - 0.996) < 0.005 &&
         std::abs(ibm_report.f_avg_upper - 0.998) < 0.001 &&
         std::abs(ibm_report.u_lower - 0.988) < 0.005 &&
         std::abs(ibm_report.u_upper - 0.991) < 0.005;
}

// --- criterion 6 -----------------------------------------------------------

bool frame_mismatch(std::string& detail) {
  const auto start = Clock::now();
  // The published eigenvalues correspond to a mismatch exponent of
  // 0.05 * pi/2 radians; the printed 0.05 deg does not reproduce them
  // (see the decisions ledger).
  const double theta = 0.05 * M_PI / 2.0;
  FrameMismatchParams params;
  params.base_gate = cnot_channel();
  Eigen::Matrix4cd v = Eigen::Matrix4cd::Zero();
  const Eigen::Matrix2cd ry = ry_gate(theta);
  v.block<2, 2>(0, 0) = ry;
  v.block<2, 2>(2, 2) = ry;
  params.mismatch_unitary = v;
  params.max_index = 50;

  const auto g = frame_mismatch_signal(params);
  const auto fit = pencil_fit(g.values, PencilConfig{4, 25, 50});

  Eigen::VectorXcd expected(4);
  expected << std::complex<double>(0.9636, 0.0328),
      std::complex<double>(0.9636, -0.0328),
      std::complex<double>(-0.9804, 0.0495),
      std::complex<double>(-0.9804, -0.0495);
  const auto assign = match_eigenvalues(expected, fit.eigenvalues);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    worst = std::max(worst, std::abs(expected[i] -
                                     fit.eigenvalues[assign[static_cast<std::size_t>(i)]]));
  int real_count = 0;
  for (int i = 0; i < 4; ++i)
    if (std::abs(fit.eigenvalues[i].imag()) <= 1e-6) ++real_count;
  const double elapsed = seconds_since(start);

  char buffer[160];
  std::snprintf(buffer, sizeof buffer,
                "max eigenvalue error %.2e, real eigenvalues %d, %.2f s", worst,
                real_count, elapsed);
  detail = buffer;
  return worst < 2e-3 && real_count == 0 && elapsed < 10.0;
}

// --- criterion 7 -----------------------------------------------------------

bool gaussian_cz(std::string& detail) {
  GaussianCzParams params;
  params.max_index = 50;

  params.sigma_degrees = 22.9;
  const auto main_signal = gaussian_cz_signal(params).signal;
  const auto sel = select_model_order(main_signal.values, 25, 1, 12, 0.01);
  const auto& fit = sel.fits.at(sel.selected);
  const double max_mod_50 = fit.eigenvalues.cwiseAbs().maxCoeff();
  const bool has_unphysical = max_mod_50 > 1.0;

  params.max_index = 200;
  const auto long_signal = gaussian_cz_signal(params).signal;
  const auto sel200 = select_model_order(long_signal.values, 100, 1, 15, 0.01);
  const double max_mod_200 =
      sel200.fits.at(sel200.selected).eigenvalues.cwiseAbs().maxCoeff();
  const bool moduli_shrink = max_mod_200 < max_mod_50 && max_mod_200 > 0.99;

  params.max_index = 50;
  params.sigma_degrees = 5.7;
  const auto low = gaussian_cz_signal(params).signal;
  const auto sel_low = select_model_order(low.values, 25, 1, 12, 0.01);
  const double max_mod_low =
      sel_low.fits.at(sel_low.selected).eigenvalues.cwiseAbs().maxCoeff();

  params.sigma_degrees = 40.1;
  const auto high = gaussian_cz_signal(params).signal;
  const auto sel_high = select_model_order(high.values, 25, 1, 12, 0.01);
  const double max_mod_high =
      sel_high.fits.at(sel_high.selected).eigenvalues.cwiseAbs().maxCoeff();

  char buffer[260];
  std::snprintf(buffer, sizeof buffer,
                "N*(22.9)=%d maxmod %.3f; K=200 maxmod %.3f; N*(5.7)=%d maxmod "
                "%.3f; N*(40.1)=%d maxmod %.3f",
                sel.selected, max_mod_50, max_mod_200, sel_low.selected,
                max_mod_low, sel_high.selected, max_mod_high);
  detail = buffer;

  const bool pattern_ok = max_mod_low <= 1.0 + 1e-3 && max_mod_high > 1.0;
  // The selected-order assertion follows the stated criterion; see the
  // decisions ledger for why N* = 12 is not reproduced by this recipe.
  return sel.selected == 12 && has_unphysical && moduli_shrink && pattern_ok;
}

// --- criterion 8 -----------------------------------------------------------

bool revivals(std::string& detail) {
  const auto start = Clock::now();
  RevivalParams params;
  params.nbar = 5.0;
  params.omega_dt = 0.05;
  params.max_index = 900;
  const auto g = revival_signal(params);
  const auto fit = pencil_fit(g.values, PencilConfig{15, 450, 900});
  const double rms_limit = 0.05 * g.values.cwiseAbs().maxCoeff();
  const double max_mod = fit.eigenvalues.cwiseAbs().maxCoeff();

  params.max_index = 5000;
  const auto g_long = revival_signal(params);
  const auto fit_long = pencil_fit(g_long.values, PencilConfig{15, 600, 5000});
  const double max_mod_long = fit_long.eigenvalues.cwiseAbs().maxCoeff();
  const double elapsed = seconds_since(start);

  char buffer[200];
  std::snprintf(buffer, sizeof buffer,
                "rms %.3g (limit %.3g), maxmod %.4f; K=5000 maxmod %.6f; %.1f s",
                fit.rms, rms_limit, max_mod, max_mod_long, elapsed);
  detail = buffer;
  return fit.rms < rms_limit && max_mod > 1.0 && max_mod_long <= 1.0 + 1e-3 &&
         elapsed < 60.0;
}

// --- criterion 9 -----------------------------------------------------------

bool bound_soundness(std::string& detail) {
  RandomStream rng(909);
  const auto basis = pauli_basis(1);
  int violations = 0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto noise = ptm_from_kraus(random_kraus(2, 2, rng), basis);
    const auto target = unitary_channel(haar_unitary(2, rng));
    const auto channel = ptm_compose(noise, target);

    const Eigen::VectorXcd eigs = spectrum(channel.traceless_block()).eigenvalues;
    const Eigen::VectorXcd ideal = spectrum(target.traceless_block()).eigenvalues;

    const double u_true = unitarity(channel);
    const auto bounds = unitarity_bounds_qubit(eigs);
    const double f_true = entanglement_fidelity(channel, target);
    const double f_bound = fidelity_upper_bound(eigs, ideal, bounds.upper, 2);
    const double s2_true = unitality_s2(channel);
    const double s2_bound = unitality_bound_qubit(eigs);

    const double gaps[4] = {bounds.lower - u_true, u_true - bounds.upper,
                            f_true - f_bound, s2_true - s2_bound};
    for (const double gap : gaps) {
      worst_gap = std::max(worst_gap, gap);
      if (gap > 1e-9) ++violations;
    }
  }
  char buffer[120];
  std::snprintf(buffer, sizeof buffer, "violations %d, worst gap %.2e",
                violations, worst_gap);
  detail = buffer;
  return violations == 0;
}

// --- criterion 10 ----------------------------------------------------------

bool budget(std::string& detail) {
  const long one = experiment_budget(1, 49);
  const long two = experiment_budget(2, 49);
  detail = "n=1: " + std::to_string(one) + ", n=2: " + std::to_string(two);
  return one == 300 && two == 3000;
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"1 exact recovery of 100 random channels", exact_recovery},
      {"2 depolarizing and amplitude-damping spectra", channel_spectra},
      {"3 Lindblad cases 1-3 with critical damping", lindblad_cases},
      {"4 accuracy study: L flatness and sample scaling", accuracy_study},
      {"5 published eigenvalue bounds (QI, IBM)", published_bounds},
      {"6 frame mismatch eigenvalues and no real eigenvalue", frame_mismatch},
      {"7 Gaussian-CZ model selection and unphysical moduli", gaussian_cz},
      {"8 revival fits and modulus convergence", revivals},
      {"9 bound soundness over 1000 random channels", bound_soundness},
      {"10 experiment budget", budget},
  };

  int failures = 0;
  for (const auto& check : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = check.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << check.name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
  }
  if (failures > 0)
    std::cout << failures << " criterion(s) failed" << std::endl;
  return failures == 0 ? 0 : 1;
}
