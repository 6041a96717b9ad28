#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spectomo/channels.hpp>
#include <spectomo/io.hpp>
#include <spectomo/pencil.hpp>
#include <spectomo/quality.hpp>
#include <spectomo/signal.hpp>
#include <spectomo/spectrum.hpp>

#include <sstream>

using namespace spectomo;

TEST_CASE("transfer matrix JSON round trip") {
  const auto s = amplitude_damping_channel(0.12);
  const auto j = io::ptm_to_json(s);
  CHECK(j.at("d") == 2);
  CHECK(j.at("basis") == "pauli");
  const auto back = io::ptm_from_json(j);
  CHECK((back.matrix - s.matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.dim == 2);
}

TEST_CASE("signal JSON and CSV round trips") {
  auto g = signal_nospam(depolarizing_channel(1, 0.2).traceless_block(), 6);
  g.n_samples = 4096;
  g.source = SpectralSignal::Source::simulated_noisy;

  const auto j = io::signal_to_json(g);
  CHECK(j.at("K") == 6);
  CHECK(j.at("n_samples") == 4096.0);
  const auto back = io::signal_from_json(j);
  CHECK((back.values - g.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.source == SpectralSignal::Source::simulated_noisy);

  auto exact = g;
  exact.n_samples.reset();
  CHECK(io::signal_to_json(exact).at("n_samples") == "exact");
  CHECK_FALSE(io::signal_from_json(io::signal_to_json(exact)).n_samples.has_value());

  const std::string csv = io::signal_to_csv(g);
  CHECK(csv.rfind("k,g\n", 0) == 0);
  std::istringstream in(csv);
  const auto from_csv = io::signal_from_csv(in);
  CHECK((from_csv.values - g.values).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("counts JSONL round trip") {
  CountsRecord record;
  record.pauli_label = "X";
  record.pauli_index = 1;
  record.prep_eigenstate = 0;
  record.k = 3;
  record.counts = {{0, 4100}, {1, 4092}};
  const auto j = io::counts_to_json(record);
  CHECK(j.at("pauli") == "X");
  CHECK(j.at("counts").at("0") == 4100);
  const auto back = io::counts_from_json(j);
  CHECK(back.counts == record.counts);
  CHECK(back.k == 3);

  nlohmann::json empty = {{"pauli", "X"}, {"prep", 0}, {"k", 0},
                          {"counts", nlohmann::json::object()}};
  CHECK_THROWS_AS(io::counts_from_json(empty), std::invalid_argument);
}

TEST_CASE("fit JSON carries eigenvalues, selection and intervals") {
  const auto gate = unitary_channel(rx_gate(0.8));
  const auto g = signal_nospam(gate.traceless_block(), 30);
  const auto sel = select_model_order(g.values, 15, 1, 6, 0.05);
  const auto& fit = sel.fits.at(sel.selected);

  const auto j = io::fit_to_json(fit, &sel);
  CHECK(j.at("N") == sel.selected);
  CHECK(j.at("selection").at("selected_N") == sel.selected);
  CHECK(j.at("p_values").size() == sel.p_values.size());

  const auto loaded = io::fit_from_json(j);
  CHECK(loaded.eigenvalues.size() == fit.eigenvalues.size());
  for (Eigen::Index i = 0; i < loaded.eigenvalues.size(); ++i)
    CHECK(std::abs(loaded.eigenvalues[i] - fit.eigenvalues[i]) < 1e-15);
}

TEST_CASE("quality report JSON mirrors the fields") {
  Eigen::VectorXcd eigs(3);
  eigs << std::complex<double>(0.691, 0.719), std::complex<double>(0.691, -0.719),
      std::complex<double>(0.997, 0.0);
  Eigen::VectorXcd ideal(3);
  ideal << std::complex<double>(1.0, 0.0), std::polar(1.0, M_PI / 4),
      std::polar(1.0, -M_PI / 4);
  const auto report = build_quality_report(eigs, ideal, 2);
  const auto j = io::quality_to_json(report);
  CHECK(j.at("d") == 2);
  CHECK(j.at("xi_max").get<double>() == doctest::Approx(report.xi));
  CHECK(j.at("u_upper").get<double>() == doctest::Approx(report.u_upper));
  CHECK(j.contains("unitality_s2_upper"));
}

TEST_CASE("footprint rows satisfy the modulus invariant") {
  const auto gate = unitary_channel(rx_gate(M_PI / 4));
  const auto g = signal_nospam(gate.traceless_block(), 20);
  const auto fit = pencil_fit(g.values, PencilConfig{3, 10, 20});
  const auto rows = io::footprint_rows(fit.eigenvalues, fit.amplitudes);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows)
    CHECK(std::abs(row.modulus - std::hypot(row.re, row.im)) < 1e-12);

  const std::string csv = io::footprint_csv(rows);
  CHECK(csv.rfind("re,im,modulus,phase_degrees,amplitude_re,amplitude_im\n", 0) == 0);

  const std::string svg = io::footprint_svg(rows);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("circle") != std::string::npos);
}
