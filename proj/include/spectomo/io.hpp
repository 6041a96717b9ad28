#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectomo/bootstrap.hpp"
#include "spectomo/counts.hpp"
#include "spectomo/pencil.hpp"
#include "spectomo/ptm.hpp"
#include "spectomo/quality.hpp"
#include "spectomo/signal.hpp"

namespace spectomo::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Transfer matrices: {"d": int, "matrix": row-major rows, "basis": name}
// ---------------------------------------------------------------------------

inline json ptm_to_json(const PauliTransferMatrix& s) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < s.matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < s.matrix.cols(); ++c) row.push_back(s.matrix(r, c));
    rows.push_back(std::move(row));
  }
  return {{"d", s.dim}, {"matrix", std::move(rows)}, {"basis", s.basis_name}};
}

inline PauliTransferMatrix ptm_from_json(const json& j) {
  PauliTransferMatrix s;
  s.dim = j.at("d").get<int>();
  s.basis_name = j.value("basis", "pauli");
  const auto& rows = j.at("matrix");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  if (n != static_cast<Eigen::Index>(s.dim) * s.dim)
    throw std::invalid_argument("ptm_from_json: matrix size does not match d");
  s.matrix.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != n)
      throw std::invalid_argument("ptm_from_json: ragged matrix");
    for (Eigen::Index c = 0; c < n; ++c)
      s.matrix(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Signals
// ---------------------------------------------------------------------------

inline const char* source_name(SpectralSignal::Source source) {
  switch (source) {
    case SpectralSignal::Source::simulated_exact: return "simulated_exact";
    case SpectralSignal::Source::simulated_noisy: return "simulated_noisy";
    case SpectralSignal::Source::ingested: return "ingested";
  }
  return "simulated_exact";
}

inline SpectralSignal::Source source_from_name(const std::string& name) {
  if (name == "simulated_exact") return SpectralSignal::Source::simulated_exact;
  if (name == "simulated_noisy") return SpectralSignal::Source::simulated_noisy;
  if (name == "ingested") return SpectralSignal::Source::ingested;
  throw std::invalid_argument("unknown signal source: " + name);
}

inline json signal_to_json(const SpectralSignal& g) {
  json j{{"n_qubits", g.n_qubits},
         {"K", g.max_index()},
         {"source", source_name(g.source)}};
  if (g.n_samples)
    j["n_samples"] = *g.n_samples;
  else
    j["n_samples"] = "exact";
  j["g"] = std::vector<double>(g.values.data(), g.values.data() + g.values.size());
  return j;
}

inline SpectralSignal signal_from_json(const json& j) {
  SpectralSignal g;
  g.n_qubits = j.at("n_qubits").get<int>();
  const auto& values = j.at("g");
  g.values.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    g.values[static_cast<Eigen::Index>(i)] = values.at(i).get<double>();
  if (j.contains("K") && j.at("K").get<int>() != g.max_index())
    throw std::invalid_argument("signal_from_json: K does not match g length");
  if (j.contains("n_samples") && j.at("n_samples").is_number())
    g.n_samples = j.at("n_samples").get<double>();
  g.source = source_from_name(j.value("source", "simulated_exact"));
  return g;
}

inline std::string signal_to_csv(const SpectralSignal& g) {
  std::ostringstream out;
  out << "k,g\n";
  out.precision(17);
  for (int k = 0; k <= g.max_index(); ++k) out << k << "," << g.values[k] << "\n";
  return out.str();
}

inline SpectralSignal signal_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("k,g", 0) != 0)
    throw std::invalid_argument("signal_from_csv: expected header 'k,g'");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("signal_from_csv: malformed row: " + line);
    const int k = std::stoi(line.substr(0, comma));
    if (k != static_cast<int>(values.size()))
      throw std::invalid_argument("signal_from_csv: non-contiguous k values");
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  SpectralSignal g;
  g.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                               static_cast<Eigen::Index>(values.size()));
  return g;
}

// ---------------------------------------------------------------------------
// Counts records (JSONL): {"pauli":"X","prep":0,"k":3,"counts":{"0":4100,...}}
// ---------------------------------------------------------------------------

inline json counts_to_json(const CountsRecord& record) {
  json counts = json::object();
  for (const auto& [outcome, c] : record.counts)
    counts[std::to_string(outcome)] = c;
  return {{"pauli", record.pauli_label},
          {"prep", record.prep_eigenstate},
          {"k", record.k},
          {"counts", std::move(counts)}};
}

inline CountsRecord counts_from_json(const json& j) {
  CountsRecord record;
  record.pauli_label = j.at("pauli").get<std::string>();
  record.prep_eigenstate = j.at("prep").get<int>();
  record.k = j.at("k").get<int>();
  for (const auto& [key, value] : j.at("counts").items())
    record.counts[std::stoi(key)] = value.get<long>();
  if (record.total_shots() <= 0)
    throw std::invalid_argument("counts_from_json: record has no shots");
  return record;
}

// ---------------------------------------------------------------------------
// Fits
// ---------------------------------------------------------------------------

inline json complex_to_json(const std::complex<double>& z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

inline std::complex<double> complex_from_json(const json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

inline json fit_to_json(const PencilFit& fit,
                        const ModelSelection* selection = nullptr,
                        const BootstrapResult* bootstrap = nullptr) {
  json j{{"N", static_cast<int>(fit.eigenvalues.size())},
         {"L", fit.config.pencil_param},
         {"K", fit.config.max_index},
         {"rms", fit.rms}};
  json eigs = json::array(), amps = json::array();
  for (Eigen::Index i = 0; i < fit.eigenvalues.size(); ++i) {
    eigs.push_back(complex_to_json(fit.eigenvalues[i]));
    amps.push_back(complex_to_json(fit.amplitudes[i]));
  }
  j["eigenvalues"] = std::move(eigs);
  j["amplitudes"] = std::move(amps);
  j["p_values"] = json::array();
  if (fit.near_duplicate_eigenvalues) j["near_duplicate_eigenvalues"] = true;
  if (selection) {
    j["p_values"] = selection->p_values;
    j["selection"] = {{"selected_N", selection->selected},
                      {"alpha", selection->alpha},
                      {"N_min", selection->n_min},
                      {"N_max", selection->n_max},
                      {"method", selection->method}};
    json rms_by_n = json::object();
    for (const auto& [n, f] : selection->fits) rms_by_n[std::to_string(n)] = f.rms;
    j["selection"]["rms_by_N"] = std::move(rms_by_n);
  }
  if (bootstrap) {
    json cis = json::array();
    for (const auto& ci : bootstrap->intervals) {
      cis.push_back({{"point", complex_to_json(ci.point)},
                     {"re", {ci.re_interval[0], ci.re_interval[1]}},
                     {"im", {ci.im_interval[0], ci.im_interval[1]}},
                     {"confidence", ci.confidence},
                     {"replicates", ci.replicates}});
    }
    j["confidence_intervals"] = std::move(cis);
    j["bootstrap"] = {{"requested_replicates", bootstrap->requested_replicates},
                      {"failed_replicates", bootstrap->failed_replicates},
                      {"loose_matches", bootstrap->loose_matches},
                      {"excessive_failures", bootstrap->excessive_failures}};
  }
  return j;
}

struct LoadedFit {
  Eigen::VectorXcd eigenvalues;
  Eigen::VectorXcd amplitudes;
  double rms = 0.0;
  int pencil_param = 0;
  int max_index = 0;
};

inline LoadedFit fit_from_json(const json& j) {
  LoadedFit fit;
  const auto& eigs = j.at("eigenvalues");
  fit.eigenvalues.resize(static_cast<Eigen::Index>(eigs.size()));
  for (std::size_t i = 0; i < eigs.size(); ++i)
    fit.eigenvalues[static_cast<Eigen::Index>(i)] = complex_from_json(eigs.at(i));
  if (j.contains("amplitudes")) {
    const auto& amps = j.at("amplitudes");
    fit.amplitudes.resize(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i)
      fit.amplitudes[static_cast<Eigen::Index>(i)] = complex_from_json(amps.at(i));
  } else {
    fit.amplitudes = Eigen::VectorXcd::Zero(fit.eigenvalues.size());
  }
  fit.rms = j.value("rms", 0.0);
  fit.pencil_param = j.value("L", 0);
  fit.max_index = j.value("K", 0);
  return fit;
}

// ---------------------------------------------------------------------------
// Quality reports
// ---------------------------------------------------------------------------

inline json quality_to_json(const QualityReport& report) {
  json eigs = json::array(), ideal = json::array();
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i)
    eigs.push_back(complex_to_json(report.eigenvalues[i]));
  for (Eigen::Index i = 0; i < report.ideal_eigenvalues.size(); ++i)
    ideal.push_back(complex_to_json(report.ideal_eigenvalues[i]));
  json j{{"d", report.d},
         {"eigenvalues", std::move(eigs)},
         {"ideal_eigenvalues", std::move(ideal)},
         {"xi_max", report.xi},
         {"xi_exact", report.xi_exact},
         {"u_lower", report.u_lower},
         {"u_upper", report.u_upper},
         {"u_feasible_min", report.u_feasible_min},
         {"f_ent_upper", report.f_ent_upper},
         {"f_avg_upper", report.f_avg_upper},
         {"f_ent_upper_conservative", report.f_ent_upper_conservative},
         {"f_avg_upper_conservative", report.f_avg_upper_conservative},
         {"f_ent_upper_corollary", report.f_ent_upper_corollary},
         {"feasible", report.feasible}};
  if (report.unitality_s2_upper) {
    j["unitality_s2_upper"] = *report.unitality_s2_upper;
    j["unitality_complex_flagged"] = report.unitality_complex_flagged;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Spectral footprint
// ---------------------------------------------------------------------------

struct FootprintRow {
  double re = 0.0;
  double im = 0.0;
  double modulus = 0.0;
  double phase_degrees = 0.0;
  double amplitude_re = 0.0;
  double amplitude_im = 0.0;
};

inline std::vector<FootprintRow> footprint_rows(const Eigen::VectorXcd& eigenvalues,
                                                const Eigen::VectorXcd& amplitudes) {
  std::vector<FootprintRow> rows;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    FootprintRow row;
    row.re = eigenvalues[i].real();
    row.im = eigenvalues[i].imag();
    row.modulus = std::abs(eigenvalues[i]);
    row.phase_degrees = std::arg(eigenvalues[i]) * 180.0 / M_PI;
    if (i < amplitudes.size()) {
      row.amplitude_re = amplitudes[i].real();
      row.amplitude_im = amplitudes[i].imag();
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string footprint_csv(const std::vector<FootprintRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "re,im,modulus,phase_degrees,amplitude_re,amplitude_im\n";
  for (const auto& r : rows)
    out << r.re << "," << r.im << "," << r.modulus << "," << r.phase_degrees << ","
        << r.amplitude_re << "," << r.amplitude_im << "\n";
  return out.str();
}

/// Static polar scatter: unit circle, half-unit guide, axes, one dot per
/// eigenvalue. Radius is the modulus; angle the phase.
inline std::string footprint_svg(const std::vector<FootprintRow>& rows) {
  constexpr double size = 420.0, center = 210.0;
  double max_mod = 1.0;
  for (const auto& r : rows) max_mod = std::max(max_mod, r.modulus);
  const double scale = 180.0 / max_mod;

  std::ostringstream out;
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
      << "\">\n";
  out << "  <rect width=\"" << size << "\" height=\"" << size
      << "\" fill=\"white\"/>\n";
  for (const double guide : {0.5, 1.0}) {
    out << "  <circle cx=\"" << center << "\" cy=\"" << center << "\" r=\""
        << guide * scale << "\" fill=\"none\" stroke=\""
        << (guide == 1.0 ? "black" : "#cccccc") << "\" stroke-width=\""
        << (guide == 1.0 ? 1.5 : 1.0) << "\"/>\n";
  }
  out << "  <line x1=\"" << center - 195 << "\" y1=\"" << center << "\" x2=\""
      << center + 195 << "\" y2=\"" << center
      << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << center << "\" y1=\"" << center - 195 << "\" x2=\""
      << center << "\" y2=\"" << center + 195
      << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
  for (const auto& r : rows) {
    const double x = center + scale * r.re;
    const double y = center - scale * r.im;
    out << "  <circle cx=\"" << x << "\" cy=\"" << y
        << "\" r=\"4\" fill=\"#c0392b\" fill-opacity=\"0.85\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace spectomo::io
