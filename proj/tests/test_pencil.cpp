#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spectomo/assignment.hpp>
#include <spectomo/channels.hpp>
#include <spectomo/pencil.hpp>
#include <spectomo/random.hpp>
#include <spectomo/signal.hpp>
#include <spectomo/spectrum.hpp>

#include <algorithm>
#include <numeric>

using namespace spectomo;

TEST_CASE("hankel layout") {
  Eigen::VectorXd g(4);
  g << 1, 2, 3, 4;
  const Eigen::MatrixXd y = hankel(g, 1);
  REQUIRE(y.rows() == 3);
  REQUIRE(y.cols() == 2);
  CHECK(y(0, 0) == 1);
  CHECK(y(0, 1) == 2);
  CHECK(y(1, 0) == 2);
  CHECK(y(2, 1) == 4);
  CHECK_THROWS_AS(hankel(g, 3), std::invalid_argument);
}

TEST_CASE("hankel rank equals the exponential content") {
  Eigen::VectorXd constant = Eigen::VectorXd::Constant(11, 2.5);
  Eigen::BDCSVD<Eigen::MatrixXd> svd_const(hankel(constant, 5));
  CHECK(svd_const.singularValues()(1) < 1e-12 * svd_const.singularValues()(0));

  const auto gate = amplitude_damping_channel(0.3);
  const auto g = signal_nospam(gate.traceless_block(), 12);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(hankel(g.values, 6));
  // Two distinct eigenvalues (0.9-ish double and its square): numerical rank 2.
  CHECK(svd.singularValues()(2) < 1e-10 * svd.singularValues()(0));
}

TEST_CASE("single exponential recovery") {
  Eigen::VectorXd g(11);
  for (int k = 0; k <= 10; ++k) g[k] = 3.0 * std::pow(0.9, k);
  const auto eigs = pencil_eigs(g, PencilConfig{1, 5, 10});
  REQUIRE(eigs.size() == 1);
  CHECK(std::abs(eigs[0] - std::complex<double>(0.9, 0.0)) < 1e-12);
}

TEST_CASE("noiseless recovery of a damped complex pair") {
  Eigen::VectorXd g(11);
  const std::complex<double> a(0.9, 0.0), b = 0.8 * std::polar(1.0, 0.3),
                             c = std::conj(b);
  for (int k = 0; k <= 10; ++k)
    g[k] = (std::pow(a, k) + std::pow(b, k) + std::pow(c, k)).real();
  const auto eigs = pencil_eigs(g, PencilConfig{3, 5, 10});
  Eigen::VectorXcd truth(3);
  truth << a, b, c;
  CHECK(matched_squared_error(truth, eigs) < 1e-18);
}

TEST_CASE("ideal CNOT signal at N=2 gives {1, -1}") {
  const auto g = signal_nospam(cnot_channel().traceless_block(), 50);
  const auto eigs = pencil_eigs(g.values, PencilConfig{2, 25, 50});
  CHECK(std::abs(eigs[0] - std::complex<double>(1.0, 0.0)) < 1e-9);
  CHECK(std::abs(eigs[1] - std::complex<double>(-1.0, 0.0)) < 1e-9);
}

TEST_CASE("exact recovery across the valid L range") {
  RandomStream rng(6);
  const auto gate = ptm_from_kraus(random_kraus(2, 4, rng), pauli_basis(1));
  const Eigen::VectorXcd truth = spectrum(gate.traceless_block()).eigenvalues;
  const int k_max = 12, order = 3;
  const auto g = signal_nospam(gate.traceless_block(), k_max);
  for (int l = order; l <= k_max - order + 1; ++l) {
    const auto eigs = pencil_eigs(g.values, PencilConfig{order, l, k_max});
    CHECK(matched_squared_error(truth, eigs) < 1e-18);
  }
}

TEST_CASE("under-determined order is reported") {
  Eigen::VectorXd g(21);
  for (int k = 0; k <= 20; ++k) g[k] = std::pow(0.8, k);
  CHECK_THROWS_AS(pencil_eigs(g, PencilConfig{4, 10, 20}), UnderdeterminedOrder);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS((PencilConfig{0, 5, 10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PencilConfig{6, 5, 10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PencilConfig{4, 8, 10}.validate()), std::invalid_argument);
  CHECK_NOTHROW((PencilConfig{3, 5, 10}.validate()));
  CHECK(PencilConfig::with_default_pencil(3, 50).pencil_param == 25);
}

TEST_CASE("fit_amplitudes: SPAM-free amplitudes are all one") {
  const auto gate = unitary_channel(rx_gate(M_PI / 4));
  const auto g = signal_nospam(gate.traceless_block(), 20);
  const auto eigs = pencil_eigs(g.values, PencilConfig{3, 10, 20});
  const auto fit = fit_amplitudes(g.values, eigs, PencilConfig{3, 10, 20});
  CHECK(fit.rms < 1e-10);
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(fit.amplitudes[j] - std::complex<double>(1.0, 0.0)) < 1e-8);
}

TEST_CASE("fit_amplitudes: SPAM amplitudes match the diagonalization oracle") {
  RandomStream rng(9);
  const auto gate = ptm_from_kraus(random_kraus(2, 4, rng), pauli_basis(1));
  SpamModel spam{amplitude_damping_channel(0.04), depolarizing_channel(1, 0.05)};
  const Eigen::MatrixXd t = gate.traceless_block();
  const auto g = signal_spam(t, spam, 30);

  Eigen::EigenSolver<Eigen::MatrixXd> es(t, true);
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::MatrixXcd a_spam = v.inverse() *
                                  spam.prep.traceless_block() *
                                  spam.meas.traceless_block() * v;

  const auto eigs = pencil_eigs(g.values, PencilConfig{3, 15, 30});
  const auto fit = fit_amplitudes(g.values, eigs, PencilConfig{3, 15, 30});
  CHECK(fit.rms < 1e-9);

  const auto assign = match_eigenvalues(es.eigenvalues(), eigs);
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(fit.amplitudes[assign[static_cast<std::size_t>(j)]] -
                   a_spam(j, j)) < 1e-8);
}

TEST_CASE("fit_amplitudes: interpolation when K + 1 = N") {
  Eigen::VectorXd g(3);
  g << 2.0, 1.1, 0.7;
  Eigen::VectorXcd eigs(3);
  eigs << 0.9, 0.5, -0.3;
  const auto fit = fit_amplitudes(g, eigs);
  CHECK(fit.rms < 1e-12);
}

TEST_CASE("pencil fits of real signals are conjugate closed") {
  RandomStream rng(14);
  for (int trial = 0; trial < 8; ++trial) {
    const auto gate = ptm_from_kraus(random_kraus(2, 4, rng), pauli_basis(1));
    auto g = signal_nospam(gate.traceless_block(), 40);
    g = add_shot_noise(g, 2000, 100 + trial);
    const auto fit = pencil_fit(g.values, PencilConfig{3, 20, 40});
    for (int i = 0; i < 3; ++i) {
      const auto lam = fit.eigenvalues[i];
      if (std::abs(lam.imag()) < 1e-8) continue;
      bool partnered = false;
      for (int j = 0; j < 3 && !partnered; ++j)
        partnered = std::abs(fit.eigenvalues[j] - std::conj(lam)) < 1e-8;
      CHECK(partnered);
    }
  }
}

TEST_CASE("repeat runs produce the identical fit") {
  const auto gate = amplitude_damping_channel(0.2);
  auto g = signal_nospam(gate.traceless_block(), 30);
  g = add_shot_noise(g, 500, 3);
  const auto fit1 = pencil_fit(g.values, PencilConfig{3, 15, 30});
  const auto fit2 = pencil_fit(g.values, PencilConfig{3, 15, 30});
  CHECK((fit1.eigenvalues - fit2.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit1.rms == fit2.rms);
}

TEST_CASE("eigenvalues come sorted by descending modulus") {
  RandomStream rng(21);
  const auto gate = ptm_from_kraus(random_kraus(2, 4, rng), pauli_basis(1));
  auto g = signal_nospam(gate.traceless_block(), 40);
  g = add_shot_noise(g, 1000, 5);
  const auto fit = pencil_fit(g.values, PencilConfig{3, 20, 40});
  for (int i = 1; i < 3; ++i)
    CHECK(std::abs(fit.eigenvalues[i - 1]) >= std::abs(fit.eigenvalues[i]) - 1e-15);
}

TEST_CASE("select_model_order: noiseless three-eigenvalue signal picks 3") {
  const auto gate = unitary_channel(rx_gate(0.6));
  const auto g = signal_nospam(gate.traceless_block(), 40);
  const auto sel = select_model_order(g.values, 20, 1, 8, 0.05);
  CHECK(sel.selected == 3);
  for (int n = 3; n < 8; ++n)
    CHECK(sel.p_values[static_cast<std::size_t>(n - 1)] >= 0.05);
}

TEST_CASE("select_model_order rejects impossible ranges") {
  Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(11, 1.0, 0.5);
  CHECK_THROWS_AS(select_model_order(g, 5, 1, 9, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(select_model_order(g, 5, 3, 3, 0.05), std::invalid_argument);
}

TEST_CASE("rms decreases with order on a noisy three-exponential signal") {
  const auto gate = unitary_channel(rx_gate(M_PI / 5));
  auto g = signal_nospam(gate.traceless_block(), 50);
  g = add_shot_noise(g, 1000, 8);
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 3; ++n) {
    const auto fit = pencil_fit(g.values, PencilConfig{n, 25, 50});
    CHECK(fit.rms <= previous + 1e-12);
    previous = fit.rms;
  }
}

TEST_CASE("min_cost_assignment agrees with brute force on small instances") {
  RandomStream rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform();

    const auto assign = min_cost_assignment(cost);
    double got = 0.0;
    for (int i = 0; i < n; ++i) got += cost(i, assign[static_cast<std::size_t>(i)]);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += cost(i, perm[static_cast<std::size_t>(i)]);
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == doctest::Approx(best).epsilon(1e-12));
  }
}
