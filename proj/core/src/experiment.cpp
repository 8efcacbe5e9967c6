#include "qdft/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <fstream>
#include <ostream>
#include <set>

#include <spdlog/spdlog.h>

#include "qdft/aux_mapping.hpp"
#include "qdft/mol_bundle.hpp"
#include "qdft/mol_dft.hpp"
#include "qdft/quantum_solver.hpp"
#include "qdft/reference.hpp"
#include "qdft/rng.hpp"
#include "qdft/soft_hubbard.hpp"

namespace qdft {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::soft_hubbard: return "soft-hubbard";
    case ExperimentKind::mol_dft: return "mol-dft";
    case ExperimentKind::map_check: return "map-check";
  }
  return "?";
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::classical: return "classical";
    case SolverKind::quantum_exact: return "quantum-exact";
    case SolverKind::quantum_sampled: return "quantum-sampled";
  }
  return "?";
}

const char* to_string(OptimizerKind kind) { return kind == OptimizerKind::lbfgs ? "lbfgs" : "spsa"; }

namespace {

template <class E>
E parse_enum(const std::string& text, std::initializer_list<E> values, const char* what) {
  for (E v : values) {
    if (text == to_string(v)) return v;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + text + "'");
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Boundary parse_boundary(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  if (s == "antiperiodic") return Boundary::antiperiodic;
  throw ConfigError("unknown boundary '" + s + "'");
}

}  // namespace

SolverKind parse_solver(const std::string& s) {
  return parse_enum(s, {SolverKind::classical, SolverKind::quantum_exact, SolverKind::quantum_sampled}, "solver");
}

OptimizerKind ExperimentConfig::effective_optimizer() const {
  if (optimizer) return *optimizer;
  return solver == SolverKind::quantum_sampled ? OptimizerKind::spsa : OptimizerKind::lbfgs;
}

void ExperimentConfig::validate() const {
  if (layers < 1) throw ConfigError("layers must be at least 1");
  if (solver == SolverKind::quantum_sampled) {
    if (shots < 1) throw ConfigError("shots must be positive");
    if (effective_optimizer() == OptimizerKind::lbfgs) throw ConfigError("quantum-sampled needs the spsa optimizer");
  }
  if (spsa_iterations < 1) throw ConfigError("spsa_iterations must be positive");
  if (!(limits.mixing > 0.0 && limits.mixing <= 1.0)) throw ConfigError("mixing must lie in (0, 1]");
  switch (kind) {
    case ExperimentKind::soft_hubbard: {
      if (u_grid.empty()) throw ConfigError("U grid is empty");
      for (double u : u_grid) {
        if (!(u >= 0.0)) throw ConfigError("U values must be non-negative");
      }
      parse_boundary(boundary);
      HubbardSpec s;
      s.n_sites = n_sites;
      s.n_electrons = n_electrons;
      s.t = t;
      try {
        s.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      break;
    }
    case ExperimentKind::mol_dft:
      if (bundles.empty()) throw ConfigError("no bundle given");
      break;
    case ExperimentKind::map_check:
      if (map_n < 2) throw ConfigError("N must be at least 2");
      if (trials < 1) throw ConfigError("trials must be positive");
      break;
  }
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  static const std::set<std::string> known{"kind",        "solver",   "shots",    "allocation",   "seed",
                                           "layers",      "optimizer", "spsa_iterations", "mixing",  "max_iterations",
                                           "stochastic_iterations", "tol", "U_grid", "n_sites", "n_electrons",
                                           "t",           "v_slope",  "boundary", "bundles",      "N",
                                           "trials",      "timing"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    if (doc.contains("kind")) {
      c.kind = parse_enum(doc["kind"].get<std::string>(),
                          {ExperimentKind::soft_hubbard, ExperimentKind::mol_dft, ExperimentKind::map_check}, "kind");
    }
    if (doc.contains("solver")) c.solver = parse_solver(doc["solver"].get<std::string>());
    if (doc.contains("shots")) c.shots = doc["shots"].get<std::uint64_t>();
    if (doc.contains("allocation")) {
      const auto a = doc["allocation"].get<std::string>();
      if (a == "per-group") c.allocation = ShotAllocation::per_group;
      else if (a == "per-term") c.allocation = ShotAllocation::per_term;
      else throw ConfigError("unknown allocation '" + a + "'");
    }
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("layers")) c.layers = doc["layers"].get<int>();
    if (doc.contains("optimizer")) {
      c.optimizer = parse_enum(doc["optimizer"].get<std::string>(), {OptimizerKind::lbfgs, OptimizerKind::spsa},
                               "optimizer");
    }
    if (doc.contains("spsa_iterations")) c.spsa_iterations = doc["spsa_iterations"].get<int>();
    if (doc.contains("mixing")) c.limits.mixing = doc["mixing"].get<double>();
    if (doc.contains("max_iterations")) c.limits.max_iterations = doc["max_iterations"].get<int>();
    if (doc.contains("stochastic_iterations")) c.limits.stochastic_iterations = doc["stochastic_iterations"].get<int>();
    if (doc.contains("tol")) c.limits.tol = doc["tol"].get<double>();
    if (doc.contains("U_grid")) c.u_grid = doc["U_grid"].get<std::vector<double>>();
    if (doc.contains("n_sites")) c.n_sites = doc["n_sites"].get<int>();
    if (doc.contains("n_electrons")) c.n_electrons = doc["n_electrons"].get<int>();
    if (doc.contains("t")) c.t = doc["t"].get<double>();
    if (doc.contains("v_slope")) c.v_slope = doc["v_slope"].get<double>();
    if (doc.contains("boundary")) c.boundary = doc["boundary"].get<std::string>();
    if (doc.contains("bundles")) c.bundles = doc["bundles"].get<std::vector<std::string>>();
    if (doc.contains("N")) c.map_n = doc["N"].get<int>();
    if (doc.contains("trials")) c.trials = doc["trials"].get<int>();
    if (doc.contains("timing")) c.timing = doc["timing"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ill-typed config value: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json doc{{"kind", to_string(c.kind)},
           {"solver", to_string(c.solver)},
           {"shots", c.shots},
           {"allocation", c.allocation == ShotAllocation::per_group ? "per-group" : "per-term"},
           {"seed", c.seed},
           {"layers", c.layers},
           {"optimizer", to_string(c.effective_optimizer())},
           {"spsa_iterations", c.spsa_iterations},
           {"mixing", c.limits.mixing},
           {"max_iterations", c.limits.max_iterations},
           {"stochastic_iterations", c.limits.stochastic_iterations},
           {"tol", c.limits.tol},
           {"U_grid", c.u_grid},
           {"n_sites", c.n_sites},
           {"n_electrons", c.n_electrons},
           {"t", c.t},
           {"v_slope", c.v_slope},
           {"boundary", c.boundary},
           {"bundles", c.bundles},
           {"N", c.map_n},
           {"trials", c.trials},
           {"timing", c.timing}};
  return doc;
}

namespace {

std::unique_ptr<OrbitalSolver> make_solver(const ExperimentConfig& c, std::uint64_t seed) {
  if (c.solver == SolverKind::classical) return std::make_unique<ClassicalOrbitalSolver>();
  QuantumSolverConfig q;
  q.layers = c.layers;
  q.seed = seed;
  if (c.effective_optimizer() == OptimizerKind::spsa) {
    SpsaConfig sp;
    sp.spsa.max_iterations = c.spsa_iterations;
    q.optimizer = sp;
  } else {
    q.optimizer = QuasiNewtonConfig{};
  }
  if (c.solver == SolverKind::quantum_sampled) q.shots = ShotBudget{c.shots, c.allocation, seed};
  return std::make_unique<QuantumOrbitalSolver>(q);
}

ResultRecord make_record(const ExperimentConfig& c, std::uint64_t seed, const ScfState& quantum,
                         const ScfState& classical, double wall) {
  ResultRecord r;
  r.solver = c.solver;
  r.shots = c.solver == SolverKind::quantum_sampled ? c.shots : 0;
  r.seed = seed;
  r.e0 = quantum.total_energy;
  r.e0_classical = classical.total_energy;
  r.abs_error = std::abs(r.e0 - r.e0_classical);
  r.iterations = quantum.iterations;
  r.converged = quantum.converged;
  r.orbital_energies = quantum.orbital_energies;
  r.occupations.assign(quantum.occupations.data(), quantum.occupations.data() + quantum.occupations.size());
  r.pauli_terms = quantum.pauli_terms;
  r.measurement_groups = quantum.measurement_groups;
  if (c.timing) r.wall_time_s = wall;
  return r;
}

template <class Problem, class Run>
ResultRecord run_point(const ExperimentConfig& c, std::uint64_t seed, const Problem& problem, Run run,
                       std::vector<ResultRecord>& done) {
  const auto start = std::chrono::steady_clock::now();
  try {
    ClassicalOrbitalSolver reference;
    const ScfState classical = run(problem, reference);
    ScfState quantum = classical;
    if (c.solver != SolverKind::classical) {
      auto solver = make_solver(c, seed);
      quantum = run(problem, *solver);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return make_record(c, seed, quantum, classical, wall);
  } catch (const ScfDivergence& e) {
    throw ExperimentAborted(e.what(), done);
  }
}

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ResultRecord> records;
  if (config.kind == ExperimentKind::soft_hubbard) {
    for (std::size_t i = 0; i < config.u_grid.size(); ++i) {
      HubbardSpec spec;
      spec.n_sites = config.n_sites;
      spec.n_electrons = config.n_electrons;
      spec.t = config.t;
      spec.U = config.u_grid[i] * config.t;
      spec.boundary = parse_boundary(config.boundary);
      spec.v_ext.resize(static_cast<std::size_t>(spec.n_sites));
      for (int s = 0; s < spec.n_sites; ++s) spec.v_ext[static_cast<std::size_t>(s)] = config.v_slope * s;
      const std::uint64_t seed = config.seed + i;
      auto r = run_point(config, seed, spec,
                         [&config](const HubbardSpec& sp, OrbitalSolver& so) { return run_soft_scf(sp, so, config.limits); },
                         records);
      r.sweep = fmt12(config.u_grid[i]);
      r.sweep_value = config.u_grid[i];
      spdlog::info("U/t={} E0={:.10f} E0_classical={:.10f} |dE|={:.3e} it={}", r.sweep, r.e0, r.e0_classical,
                   r.abs_error, r.iterations);
      records.push_back(std::move(r));
    }
  } else if (config.kind == ExperimentKind::mol_dft) {
    for (std::size_t i = 0; i < config.bundles.size(); ++i) {
      MolBundle bundle;
      try {
        bundle = load_bundle(config.bundles[i]);
      } catch (const BundleError& e) {
        throw ConfigError(config.bundles[i] + ": " + e.what());
      }
      const std::uint64_t seed = config.seed + i;
      auto r = run_point(config, seed, bundle,
                         [&config](const MolBundle& b, OrbitalSolver& so) { return run_dft_scf(b, so, config.limits); },
                         records);
      r.sweep = std::filesystem::path(config.bundles[i]).filename().string();
      r.sweep_value = bundle.metadata.contains("distance") && bundle.metadata["distance"].is_number()
                          ? bundle.metadata["distance"].get<double>()
                          : static_cast<double>(i);
      spdlog::info("{} E0={:.10f} E0_classical={:.10f} |dE|={:.3e} it={}", r.sweep, r.e0, r.e0_classical, r.abs_error,
                   r.iterations);
      records.push_back(std::move(r));
    }
  } else {
    throw ConfigError("run_experiment: map-check runs through run_map_check");
  }
  return records;
}

std::vector<MapCheckRecord> run_map_check(int n, int trials, std::uint64_t seed, double tol) {
  std::vector<MapCheckRecord> out;
  for (int k = 0; k < trials; ++k) {
    CounterRng rng(derive_key(seed, {static_cast<std::uint64_t>(k)}));
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = 2.0 * rng.uniform() - 1.0;
    const AuxHamiltonian aux = map_ks_to_aux(KsMatrix(h));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(h, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> got(aux_to_dense(aux), Eigen::EigenvaluesOnly);
    std::vector<double> expected(ref.eigenvalues().data(), ref.eigenvalues().data() + n);
    expected.resize(std::size_t{1} << aux.num_qubits, aux.padding_value);
    std::sort(expected.begin(), expected.end());
    MapCheckRecord r{k, n, aux.num_qubits, 0.0, false};
    for (std::size_t i = 0; i < expected.size(); ++i) {
      r.max_error = std::max(r.max_error, std::abs(expected[i] - got.eigenvalues()(static_cast<Eigen::Index>(i))));
    }
    r.pass = r.max_error < tol;
    out.push_back(r);
  }
  return out;
}

json records_to_json(const std::vector<ResultRecord>& records, ExperimentKind kind) {
  json rows = json::array();
  for (const auto& r : records) {
    json row{{"sweep", r.sweep},
             {"sweep_value", r.sweep_value},
             {"solver", to_string(r.solver)},
             {"shots", r.shots},
             {"seed", r.seed},
             {"E0", r.e0},
             {"E0_classical", r.e0_classical},
             {"abs_error", r.abs_error},
             {"iterations", r.iterations},
             {"converged", r.converged},
             {"orbital_energies", r.orbital_energies},
             {"occupations", r.occupations},
             {"pauli_terms", r.pauli_terms},
             {"measurement_groups", r.measurement_groups}};
    if (r.wall_time_s) row["wall_time_s"] = *r.wall_time_s;
    rows.push_back(std::move(row));
  }
  return json{{"kind", to_string(kind)}, {"records", rows}};
}

std::vector<ResultRecord> records_from_json(const json& doc) {
  std::vector<ResultRecord> out;
  for (const auto& row : doc.at("records")) {
    ResultRecord r;
    r.sweep = row.at("sweep").get<std::string>();
    r.sweep_value = row.at("sweep_value").get<double>();
    r.solver = parse_solver(row.at("solver").get<std::string>());
    r.shots = row.at("shots").get<std::uint64_t>();
    r.seed = row.at("seed").get<std::uint64_t>();
    r.e0 = row.at("E0").get<double>();
    r.e0_classical = row.at("E0_classical").get<double>();
    r.abs_error = row.at("abs_error").get<double>();
    r.iterations = row.at("iterations").get<int>();
    r.converged = row.at("converged").get<bool>();
    r.orbital_energies = row.at("orbital_energies").get<std::vector<double>>();
    r.occupations = row.at("occupations").get<std::vector<double>>();
    r.pauli_terms = row.at("pauli_terms").get<std::size_t>();
    r.measurement_groups = row.at("measurement_groups").get<std::size_t>();
    if (row.contains("wall_time_s")) r.wall_time_s = row["wall_time_s"].get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

void write_results(std::ostream& out, const std::vector<ResultRecord>& records, OutputFormat format,
                   ExperimentKind kind) {
  if (format == OutputFormat::json) {
    out << records_to_json(records, kind).dump(2) << '\n';
    return;
  }
  const bool timing = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.wall_time_s; });
  out << (kind == ExperimentKind::mol_dft ? "bundle" : "U_over_t")
      << ",solver,shots,seed,E0,E0_classical,abs_error,iterations" << (timing ? ",wall_time_s" : "") << '\n';
  for (const auto& r : records) {
    out << r.sweep << ',' << to_string(r.solver) << ',' << r.shots << ',' << r.seed << ',' << fmt12(r.e0) << ','
        << fmt12(r.e0_classical) << ',' << fmt12(r.abs_error) << ',' << r.iterations;
    if (timing) out << ',' << (r.wall_time_s ? fmt12(*r.wall_time_s) : "");
    out << '\n';
  }
}

void emit_results(const std::vector<ResultRecord>& records, OutputFormat format, const std::string& path,
                  ExperimentKind kind) {
  if (records.empty()) throw std::runtime_error("emit_results: no records");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("emit_results: cannot write " + path);
  write_results(out, records, format, kind);
  if (!out) throw std::runtime_error("emit_results: write failed for " + path);
}

void write_map_check_csv(std::ostream& out, const std::vector<MapCheckRecord>& records) {
  out << "trial,N,num_qubits,max_error,pass\n";
  for (const auto& r : records) {
    out << r.trial << ',' << r.n << ',' << r.num_qubits << ',' << fmt12(r.max_error) << ',' << (r.pass ? 1 : 0)
        << '\n';
  }
}

}  // namespace qdft
