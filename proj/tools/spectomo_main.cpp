// Command-line front end: build channels, simulate or ingest repeated-gate
// signals, run the matrix-pencil fit with model selection and bootstrap
// intervals, convert spectra into gate-quality bounds, and emit spectral
// footprint plot data.
//
// Exit codes: 2 malformed spec, 3 invalid channel, 4 infeasible pencil
// configuration, 5 spectrum incompatible with repeated TPCP dynamics,
// 6 counts ingestion failure.

#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <spectomo/bootstrap.hpp>
#include <spectomo/channels.hpp>
#include <spectomo/counts.hpp>
#include <spectomo/io.hpp>
#include <spectomo/lindblad.hpp>
#include <spectomo/nonmarkov.hpp>
#include <spectomo/pencil.hpp>
#include <spectomo/quality.hpp>
#include <spectomo/signal.hpp>
#include <spectomo/spectrum.hpp>
#include <spectomo/sweep.hpp>

namespace {

using nlohmann::json;
using namespace spectomo;

struct MalformedSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidChannel : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleFit : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompatibleSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CountsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SPECTOMO_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw MalformedSpec(std::string("cannot parse ") + path + ": " + e.what());
  }
}

Eigen::MatrixXcd unitary_from_json(const json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd u(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != n)
      throw MalformedSpec("unitary matrix is ragged");
    for (Eigen::Index c = 0; c < n; ++c)
      u(r, c) = io::complex_from_json(row.at(static_cast<std::size_t>(c)));
  }
  return u;
}

PauliTransferMatrix channel_from_name(const std::string& name, double p,
                                      double angle, int n_qubits,
                                      const std::string& matrix_file) {
  try {
    if (name == "depolarizing") return depolarizing_channel(n_qubits, p);
    if (name == "amplitude_damping") return amplitude_damping_channel(p);
    if (name == "rx") return unitary_channel(rx_gate(angle));
    if (name == "ry") return unitary_channel(ry_gate(angle));
    if (name == "rz") return unitary_channel(rz_gate(angle));
    if (name == "cz") return cz_channel();
    if (name == "cnot") return cnot_channel();
    if (name == "identity") return ptm_identity(1 << n_qubits);
    if (name == "unitary") {
      if (matrix_file.empty())
        throw MalformedSpec("--channel unitary needs --matrix-file");
      return unitary_channel(unitary_from_json(parse_json_file(matrix_file)));
    }
  } catch (const std::invalid_argument& e) {
    throw InvalidChannel(e.what());
  }
  throw MalformedSpec("unknown channel name: " + name);
}

PauliTransferMatrix channel_from_spec(const json& spec) {
  if (spec.contains("d") && spec.contains("matrix"))
    return io::ptm_from_json(spec);
  if (spec.contains("lindblad")) {
    const auto& l = spec.at("lindblad");
    LindbladParams p;
    p.hx = l.value("hx", 0.0);
    p.hy = l.value("hy", 0.0);
    p.hz = l.value("hz", 0.0);
    p.gamma1 = l.value("gamma1", 0.0);
    p.gamma_phi = l.value("gamma_phi", 0.0);
    try {
      return lindblad_evolve(p, l.value("tau", 1.0));
    } catch (const std::invalid_argument& e) {
      throw InvalidChannel(e.what());
    }
  }
  if (!spec.contains("channel")) throw MalformedSpec("spec lacks a channel field");
  const std::string name = spec.at("channel").get<std::string>();
  if (name == "unitary") {
    if (!spec.contains("matrix")) throw MalformedSpec("unitary spec lacks matrix");
    try {
      return unitary_channel(unitary_from_json(spec.at("matrix")));
    } catch (const std::invalid_argument& e) {
      throw InvalidChannel(e.what());
    }
  }
  return channel_from_name(name, spec.value("p", 0.0), spec.value("angle", 0.0),
                           spec.value("n_qubits", 1), "");
}

SpamModel spam_from_file(const std::string& path, int d) {
  const json j = parse_json_file(path);
  SpamModel spam = SpamModel::identity(d);
  if (j.contains("prep")) spam.prep = channel_from_spec(j.at("prep"));
  if (j.contains("meas")) spam.meas = channel_from_spec(j.at("meas"));
  if (spam.prep.dim != d || spam.meas.dim != d)
    throw InvalidChannel("SPAM model dimension does not match the gate");
  if (!validate_ptm(spam.prep).all_ok() || !validate_ptm(spam.meas).all_ok())
    throw InvalidChannel("SPAM model fails physicality validation");
  return spam;
}

SpectralSignal scenario_signal(const json& spec, int k_override) {
  const std::string name = spec.at("scenario").get<std::string>();
  const int k_max = k_override > 0 ? k_override : spec.value("K", 50);
  if (name == "gaussian_cz") {
    GaussianCzParams params;
    params.sigma_degrees = spec.value("sigma_deg", 0.0);
    params.max_index = k_max;
    params.quadrature_order = spec.value("quad_order", 100);
    const GaussianCzResult result = gaussian_cz_signal(params);
    if (!result.converged)
      std::cerr << "warning: quadrature disagrees with doubled order by "
                << result.quadrature_error << "\n";
    return result.signal;
  }
  if (name == "revival") {
    RevivalParams params;
    params.nbar = spec.value("nbar", 5.0);
    params.omega_dt = spec.value("omega_dt", 0.05);
    params.max_index = k_max;
    return revival_signal(params);
  }
  if (name == "frame_mismatch") {
    FrameMismatchParams params;
    params.max_index = k_max;
    params.base_gate = spec.contains("base_gate")
                           ? channel_from_spec(spec.at("base_gate"))
                           : cnot_channel();
    const auto& mismatch = spec.at("mismatch");
    if (mismatch.contains("matrix")) {
      params.mismatch_unitary = unitary_from_json(mismatch.at("matrix"));
    } else {
      const double theta = mismatch.contains("theta_rad")
                               ? mismatch.at("theta_rad").get<double>()
                               : mismatch.value("theta_deg", 0.0) * M_PI / 180.0;
      const std::string axis = mismatch.value("axis", "y");
      const int qubit = mismatch.value("qubit", 1);
      Eigen::Matrix2cd rot;
      if (axis == "x") rot = rx_gate(theta);
      else if (axis == "y") rot = ry_gate(theta);
      else if (axis == "z") rot = rz_gate(theta);
      else throw MalformedSpec("mismatch axis must be x, y or z");
      Eigen::Matrix4cd v = Eigen::Matrix4cd::Zero();
      const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
      const Eigen::Matrix2cd& a = qubit == 0 ? rot : eye;
      const Eigen::Matrix2cd& b = qubit == 0 ? eye : rot;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          v.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
      params.mismatch_unitary = v;
    }
    return frame_mismatch_signal(params);
  }
  throw MalformedSpec("unknown scenario: " + name);
}

void write_signal(const SpectralSignal& signal, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << io::signal_to_json(signal).dump(2) << "\n";
  } else if (out_path.size() > 4 &&
             out_path.compare(out_path.size() - 4, 4, ".csv") == 0) {
    io::write_file(out_path, io::signal_to_csv(signal));
  } else {
    io::write_file(out_path, io::signal_to_json(signal).dump(2) + "\n");
  }
}

SpectralSignal read_signal(const std::string& path) {
  if (path.size() > 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    std::ifstream in(path);
    if (!in) throw MalformedSpec("cannot open " + path);
    return io::signal_from_csv(in);
  }
  return io::signal_from_json(parse_json_file(path));
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stoi(item));
  return values;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string spec_file;
  std::string channel;
  std::string scenario;
  std::string matrix_file;
  std::string spam_file;
  std::string counts_out;
  std::string out;
  double p = 0.0;
  double angle = 0.0;
  double sigma_deg = 0.0;
  double nbar = 5.0;
  double omega_dt = 0.05;
  double theta_rad = 0.0;
  int quad_order = 100;
  int n_qubits = 1;
  int k_max = 50;
  long shots = 0;
  bool exact = false;
  std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateOptions& opt) {
  json spec;
  if (!opt.spec_file.empty()) {
    spec = parse_json_file(opt.spec_file);
  } else if (!opt.scenario.empty()) {
    spec = {{"scenario", opt.scenario}, {"K", opt.k_max},
            {"sigma_deg", opt.sigma_deg}, {"quad_order", opt.quad_order},
            {"nbar", opt.nbar}, {"omega_dt", opt.omega_dt}};
    if (opt.scenario == "frame_mismatch")
      spec["mismatch"] = {{"axis", "y"}, {"qubit", 1}, {"theta_rad", opt.theta_rad}};
  } else if (!opt.channel.empty()) {
    spec = {{"channel", opt.channel}, {"p", opt.p}, {"angle", opt.angle},
            {"n_qubits", opt.n_qubits}};
    if (!opt.matrix_file.empty())
      spec["matrix"] = parse_json_file(opt.matrix_file);
  } else {
    throw MalformedSpec("simulate needs a spec file, --channel or --scenario");
  }

  const std::uint64_t seed = resolve_seed(opt.seed);

  if (spec.contains("scenario")) {
    SpectralSignal signal = scenario_signal(spec, opt.k_max);
    if (!opt.exact && opt.shots > 0)
      signal = add_shot_noise(signal, static_cast<double>(opt.shots), seed);
    write_signal(signal, opt.out);
    return 0;
  }

  const PauliTransferMatrix gate = channel_from_spec(spec);
  const ValidityReport validity = validate_ptm(gate);
  if (!validity.all_ok())
    throw InvalidChannel("channel fails validation: " + validity.notes);

  SpamModel spam = SpamModel::identity(gate.dim);
  const bool has_spam = !opt.spam_file.empty();
  if (has_spam) spam = spam_from_file(opt.spam_file, gate.dim);

  int n_qubits = 0;
  for (int v = gate.dim; v > 1; v >>= 1) ++n_qubits;

  if (!opt.counts_out.empty()) {
    // Full multinomial sampling path, one record per (pauli, state, k).
    if (opt.shots <= 0) throw MalformedSpec("--counts-out requires --shots");
    std::ostringstream lines;
    const int n_paulis = (1 << (2 * n_qubits)) - 1;
    for (int mu = 1; mu <= n_paulis; ++mu)
      for (int i = 0; i < gate.dim; ++i)
        for (int k = 0; k <= opt.k_max; ++k) {
          const CountsRecord record =
              simulate_counts(gate, spam, mu, i, k, opt.shots, seed);
          lines << io::counts_to_json(record).dump() << "\n";
        }
    io::write_file(opt.counts_out, lines.str());
    return 0;
  }

  SpectralSignal signal =
      has_spam ? signal_spam(gate.traceless_block(), spam, opt.k_max)
               : signal_nospam(gate.traceless_block(), opt.k_max, n_qubits);
  signal.n_qubits = n_qubits;
  if (!opt.exact && opt.shots > 0)
    signal = add_shot_noise(signal, static_cast<double>(opt.shots), seed);
  write_signal(signal, opt.out);
  return 0;
}

struct FitOptions {
  std::string signal_file;
  std::string out;
  std::string footprint;
  std::string svg;
  int pencil_param = 0;  // 0 = K/2
  int order = 0;         // 0 = d^2 - 1
  bool select = false;
  double alpha = 0.05;
  int n_min = 1;
  int n_max = 0;
  int bootstrap = 0;
  double confidence = 0.95;
  std::optional<std::uint64_t> seed;
};

int run_fit(const FitOptions& opt, bool selection_report) {
  const SpectralSignal signal = read_signal(opt.signal_file);
  const int k_max = signal.max_index();
  const int pencil_param = opt.pencil_param > 0 ? opt.pencil_param : k_max / 2;
  const int full_order = (1 << (2 * signal.n_qubits)) - 1;

  PencilFit fit;
  std::optional<ModelSelection> selection;
  try {
    if (opt.select || selection_report) {
      const int n_max = opt.n_max > 0
                            ? opt.n_max
                            : std::min({pencil_param, k_max - pencil_param + 1,
                                        (k_max + 1) / 4 - 1});
      selection = select_model_order(signal.values, pencil_param, opt.n_min,
                                     n_max, opt.alpha);
      if (!selection->fits.count(selection->selected))
        throw InfeasibleFit("selection produced no usable fit");
      fit = selection->fits.at(selection->selected);
    } else {
      const int order = opt.order > 0 ? opt.order : full_order;
      fit = pencil_fit(signal.values, PencilConfig{order, pencil_param, k_max});
    }
  } catch (const UnderdeterminedOrder& e) {
    throw InfeasibleFit(e.what());
  } catch (const std::invalid_argument& e) {
    throw InfeasibleFit(e.what());
  }

  std::optional<BootstrapResult> boot;
  if (opt.bootstrap > 0) {
    boot = wild_bootstrap_ci(signal, fit.config, opt.bootstrap, opt.confidence,
                             resolve_seed(opt.seed));
    if (boot->excessive_failures)
      std::cerr << "warning: " << boot->failed_replicates
                << " bootstrap replicates failed to fit\n";
  }

  const json out = io::fit_to_json(fit, selection ? &*selection : nullptr,
                                   boot ? &*boot : nullptr);
  if (opt.out.empty())
    std::cout << out.dump(2) << "\n";
  else
    io::write_file(opt.out, out.dump(2) + "\n");

  if (!opt.footprint.empty() || !opt.svg.empty()) {
    const auto rows = io::footprint_rows(fit.eigenvalues, fit.amplitudes);
    if (!opt.footprint.empty()) io::write_file(opt.footprint, io::footprint_csv(rows));
    if (!opt.svg.empty()) io::write_file(opt.svg, io::footprint_svg(rows));
  }
  return 0;
}

struct BoundsOptions {
  std::string fit_file;
  std::string target = "identity";
  std::string matrix_file;
  double angle = 0.0;
  int d = 0;
  std::string out;
};

int run_bounds(const BoundsOptions& opt) {
  const io::LoadedFit fit = io::fit_from_json(parse_json_file(opt.fit_file));
  const Eigen::Index n = fit.eigenvalues.size();
  int d = opt.d;
  if (d == 0) {
    d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n) + 1.0)));
  }

  if (!spectrum_tpcp_compatible(fit.eigenvalues,
                                static_cast<Eigen::Index>(d) * d - 1))
    throw IncompatibleSpectrum(
        "no real eigenvalue: the gate's transfer block has odd dimension, so "
        "repeated applications of one trace-preserving gate always show a "
        "real eigenvalue; no quality bounds are computed for this spectrum");

  if (static_cast<Eigen::Index>(d) * d - 1 != n)
    throw IncompatibleSpectrum(
        "fit has " + std::to_string(n) + " eigenvalues, not d^2 - 1 for d = " +
        std::to_string(d) +
        "; spectral bounds need the full single-gate spectrum");

  PauliTransferMatrix target;
  if (opt.target == "identity") target = ptm_identity(d);
  else if (opt.target == "rx") target = unitary_channel(rx_gate(opt.angle));
  else if (opt.target == "ry") target = unitary_channel(ry_gate(opt.angle));
  else if (opt.target == "rz") target = unitary_channel(rz_gate(opt.angle));
  else if (opt.target == "cz") target = cz_channel();
  else if (opt.target == "cnot") target = cnot_channel();
  else if (opt.target == "unitary")
    target = unitary_channel(unitary_from_json(parse_json_file(opt.matrix_file)));
  else throw MalformedSpec("unknown target: " + opt.target);
  if (target.dim != d)
    throw MalformedSpec("target dimension does not match the fit");

  const Eigen::VectorXcd ideal =
      sorted_by_modulus(spectrum(target.traceless_block()).eigenvalues);
  QualityReport report = build_quality_report(fit.eigenvalues, ideal, d);
  json j = io::quality_to_json(report);
  if (opt.target == "identity")
    j["f_ent_vs_identity"] = fent_identity(fit.eigenvalues, d);

  if (opt.out.empty())
    std::cout << j.dump(2) << "\n";
  else
    io::write_file(opt.out, j.dump(2) + "\n");
  return 0;
}

int run_ingest(const std::string& counts_file, int n_qubits, int k_max,
               const std::string& out) {
  std::ifstream in(counts_file);
  if (!in) throw CountsError("cannot open " + counts_file);
  std::vector<CountsRecord> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      records.push_back(io::counts_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw CountsError("line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  try {
    IngestResult result = estimate_g_from_counts(records, n_qubits, k_max);
    if (!result.uniform_shots)
      std::cerr << "note: shot counts vary between " << result.min_shots
                << " and " << result.max_shots << "\n";
    write_signal(result.signal, out);
  } catch (const std::invalid_argument& e) {
    throw CountsError(e.what());
  }
  return 0;
}

struct SweepOptions {
  std::string channel = "random";
  double p = 0.0;
  double angle = 0.0;
  std::string k_list = "50";
  std::string l_list;
  double n_samples = 1000;
  int trials = 50;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int run_sweep(const SweepOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  PauliTransferMatrix channel;
  if (opt.channel == "random") {
    RandomStream rng(RandomStream::derive(seed, 0x5eed));
    channel = ptm_from_kraus(random_kraus(2, 4, rng), pauli_basis(1));
  } else {
    channel = channel_from_name(opt.channel, opt.p, opt.angle, 1, "");
  }
  const std::vector<int> k_list = parse_int_list(opt.k_list);
  std::vector<SweepPoint> table;
  if (!opt.l_list.empty()) {
    table = accuracy_sweep(channel, k_list, parse_int_list(opt.l_list),
                           opt.n_samples, opt.trials, seed);
  } else {
    // Default pencil parameter tracks each K at K/2.
    for (const int k : k_list) {
      const auto rows =
          accuracy_sweep(channel, {k}, {k / 2}, opt.n_samples, opt.trials, seed);
      table.insert(table.end(), rows.begin(), rows.end());
    }
  }
  std::ostringstream csv;
  csv.precision(12);
  csv << "K,L,n_samples,trials,failed,mean_delta_sq\n";
  for (const auto& point : table)
    csv << point.max_index << "," << point.pencil_param << "," << point.n_samples
        << "," << point.trials << "," << point.failed_trials << ","
        << point.mean_delta_sq << "\n";
  if (opt.out.empty())
    std::cout << csv.str();
  else
    io::write_file(opt.out, csv.str());
  return 0;
}

int run_footprint(const std::string& fit_file, const std::string& out,
                  const std::string& svg) {
  const io::LoadedFit fit = io::fit_from_json(parse_json_file(fit_file));
  const auto rows = io::footprint_rows(fit.eigenvalues, fit.amplitudes);
  if (out.empty() && svg.empty()) {
    std::cout << io::footprint_csv(rows);
    return 0;
  }
  if (!out.empty()) io::write_file(out, io::footprint_csv(rows));
  if (!svg.empty()) io::write_file(svg, io::footprint_svg(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of repeated noisy quantum gates"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a signal from a channel or scenario");
  simulate->add_option("spec", sim.spec_file, "Channel/scenario spec JSON file");
  simulate->add_option("--channel", sim.channel, "Channel name");
  simulate->add_option("--scenario", sim.scenario, "Scenario name");
  simulate->add_option("--matrix-file", sim.matrix_file, "Unitary matrix JSON");
  simulate->add_option("--spam", sim.spam_file, "SPAM model JSON file");
  simulate->add_option("--counts-out", sim.counts_out, "Write multinomial counts JSONL");
  simulate->add_option("-o,--out", sim.out, "Output signal file (.json or .csv)");
  simulate->add_option("--p", sim.p, "Channel probability parameter");
  simulate->add_option("--angle", sim.angle, "Rotation angle (radians)");
  simulate->add_option("--sigma-deg", sim.sigma_deg, "Gaussian CZ angle std (degrees)");
  simulate->add_option("--nbar", sim.nbar, "Revival mean photon number");
  simulate->add_option("--omega-dt", sim.omega_dt, "Revival Omega*dt step");
  simulate->add_option("--theta-rad", sim.theta_rad, "Frame mismatch angle (radians)");
  simulate->add_option("--quad-order", sim.quad_order, "Gauss-Hermite order");
  simulate->add_option("--n-qubits", sim.n_qubits, "Qubit count for named channels");
  simulate->add_option("--K", sim.k_max, "Maximum repetition count");
  simulate->add_option("--shots", sim.shots, "Shots per point (Gaussian surrogate)");
  simulate->add_flag("--exact", sim.exact, "No sampling noise");
  simulate->add_option("--seed", sim.seed, "RNG seed (fallback: SPECTOMO_SEED)");

  std::string ingest_file, ingest_out;
  int ingest_qubits = 1, ingest_k = 0;
  CLI::App* ingest = app.add_subcommand("ingest", "Estimate g(k) from counts JSONL");
  ingest->add_option("counts", ingest_file, "Counts JSONL file")->required();
  ingest->add_option("--n-qubits", ingest_qubits, "Qubit count")->required();
  ingest->add_option("--K", ingest_k, "Maximum repetition count")->required();
  ingest->add_option("-o,--out", ingest_out, "Output signal file");

  FitOptions fitopt;
  CLI::App* fit = app.add_subcommand("fit", "Matrix-pencil fit of a signal");
  fit->add_option("signal", fitopt.signal_file, "Signal file")->required();
  fit->add_option("--L", fitopt.pencil_param, "Pencil parameter (default K/2)");
  fit->add_option("--N", fitopt.order, "Model order (default 4^n - 1)");
  fit->add_flag("--select", fitopt.select, "Select order by F-test");
  fit->add_option("--alpha", fitopt.alpha, "F-test significance level");
  fit->add_option("--n-min", fitopt.n_min, "Smallest order to try");
  fit->add_option("--n-max", fitopt.n_max, "Largest order to try");
  fit->add_option("--bootstrap", fitopt.bootstrap, "Wild bootstrap replicates");
  fit->add_option("--confidence", fitopt.confidence, "CI confidence level");
  fit->add_option("--seed", fitopt.seed, "RNG seed (fallback: SPECTOMO_SEED)");
  fit->add_option("-o,--out", fitopt.out, "Fit JSON output");
  fit->add_option("--footprint", fitopt.footprint, "Footprint CSV output");
  fit->add_option("--svg", fitopt.svg, "Footprint SVG output");

  FitOptions selopt;
  CLI::App* select = app.add_subcommand("select", "Model-order selection report");
  select->add_option("signal", selopt.signal_file, "Signal file")->required();
  select->add_option("--L", selopt.pencil_param, "Pencil parameter (default K/2)");
  select->add_option("--alpha", selopt.alpha, "F-test significance level");
  select->add_option("--n-min", selopt.n_min, "Smallest order to try");
  select->add_option("--n-max", selopt.n_max, "Largest order to try");
  select->add_option("-o,--out", selopt.out, "Fit JSON output");

  BoundsOptions bopt;
  CLI::App* bounds = app.add_subcommand("bounds", "Gate-quality bounds from a fit");
  bounds->add_option("fit", bopt.fit_file, "Fit JSON file")->required();
  bounds->add_option("--target", bopt.target, "Target gate (identity, rx, ry, rz, cz, cnot, unitary)");
  bounds->add_option("--angle", bopt.angle, "Target rotation angle (radians)");
  bounds->add_option("--matrix-file", bopt.matrix_file, "Target unitary JSON file");
  bounds->add_option("--d", bopt.d, "System dimension (default from eigenvalue count)");
  bounds->add_option("-o,--out", bopt.out, "Report JSON output");

  std::string fp_fit, fp_out, fp_svg;
  CLI::App* footprint = app.add_subcommand("footprint", "Footprint CSV/SVG from a fit");
  footprint->add_option("fit", fp_fit, "Fit JSON file")->required();
  footprint->add_option("-o,--out", fp_out, "CSV output");
  footprint->add_option("--svg", fp_svg, "SVG output");

  SweepOptions swopt;
  CLI::App* sweep = app.add_subcommand("sweep", "Pencil accuracy sweep over K, L");
  sweep->add_option("--channel", swopt.channel, "Channel name or 'random'");
  sweep->add_option("--p", swopt.p, "Channel probability parameter");
  sweep->add_option("--angle", swopt.angle, "Rotation angle");
  sweep->add_option("--K", swopt.k_list, "Comma-separated K values");
  sweep->add_option("--L", swopt.l_list, "Comma-separated L values (default K/2)");
  sweep->add_option("--n-samples", swopt.n_samples, "Shots per point");
  sweep->add_option("--trials", swopt.trials, "Trials per (K, L)");
  sweep->add_option("--seed", swopt.seed, "RNG seed");
  sweep->add_option("-o,--out", swopt.out, "CSV output");

  SimulateOptions scopt;
  CLI::App* scenario = app.add_subcommand("scenario", "Generate a scenario signal");
  scenario->add_option("spec", scopt.spec_file, "Scenario spec JSON file");
  scenario->add_option("--name", scopt.scenario, "Scenario name");
  scenario->add_option("--sigma-deg", scopt.sigma_deg, "Gaussian CZ angle std (degrees)");
  scenario->add_option("--nbar", scopt.nbar, "Revival mean photon number");
  scenario->add_option("--omega-dt", scopt.omega_dt, "Revival Omega*dt step");
  scenario->add_option("--theta-rad", scopt.theta_rad, "Frame mismatch angle (radians)");
  scenario->add_option("--quad-order", scopt.quad_order, "Gauss-Hermite order");
  scenario->add_option("--K", scopt.k_max, "Maximum repetition count");
  scenario->add_option("-o,--out", scopt.out, "Output signal file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (ingest->parsed())
      return run_ingest(ingest_file, ingest_qubits, ingest_k, ingest_out);
    if (fit->parsed()) return run_fit(fitopt, false);
    if (select->parsed()) {
      selopt.select = true;
      return run_fit(selopt, true);
    }
    if (bounds->parsed()) return run_bounds(bopt);
    if (footprint->parsed()) return run_footprint(fp_fit, fp_out, fp_svg);
    if (sweep->parsed()) return run_sweep(swopt);
    if (scenario->parsed()) {
      scopt.exact = true;
      return run_simulate(scopt);
    }
  } catch (const MalformedSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidChannel& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InfeasibleFit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const IncompatibleSpectrum& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 5;
  } catch (const CountsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
