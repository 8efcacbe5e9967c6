// qdft: Kohn-Sham experiments with a simulated ensemble-VQE orbital solver.
//
//   qdft soft      [--U-grid 0,1,2] [--solver ...] [--out results.csv]
//   qdft dft       --bundle h8.qdft.json [--solver ...]
//   qdft map-check [--N 8] [--trials 50]
//
// Exit codes: 0 success, 1 failed map check or runtime error, 2 invalid
// configuration, 3 SCF divergence (finished points are still written).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qdft/experiment.hpp"
#include "qdft/mol_bundle.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct Overrides {
  std::string config_path;
  std::string solver;
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  std::optional<int> layers;
  std::string optimizer;
  std::string out;
  std::vector<double> u_grid;
  std::optional<int> n;
  std::optional<int> trials;
  std::vector<std::string> bundles;
  bool timing = false;
  std::string log_level = "warn";
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config");
  cmd->add_option("--seed", o.seed, "Root seed");
  cmd->add_option("--out", o.out,
                 "Output path: .json writes JSON, anything else CSV plus a .json sibling; stdout when absent");
  cmd->add_flag("--timing", o.timing, "Record wall time per point");
  cmd->add_option("--log-level", o.log_level, "trace|debug|info|warn|error")->capture_default_str();
}

void add_solver(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--solver", o.solver, "classical|quantum-exact|quantum-sampled");
  cmd->add_option("--shots", o.shots, "Shots per energy evaluation (quantum-sampled)");
  cmd->add_option("--layers", o.layers, "Entangling layers N_L");
  cmd->add_option("--optimizer", o.optimizer, "lbfgs|spsa");
}

qdft::ExperimentConfig build_config(qdft::ExperimentKind kind, const Overrides& o) {
  qdft::ExperimentConfig c;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw qdft::ConfigError("cannot open config " + o.config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw qdft::ConfigError(std::string("malformed config: ") + e.what());
    }
    c = qdft::config_from_json(doc);
  }
  c.kind = kind;
  if (!o.solver.empty()) c.solver = qdft::parse_solver(o.solver);
  if (o.shots) c.shots = *o.shots;
  if (o.seed) c.seed = *o.seed;
  if (o.layers) c.layers = *o.layers;
  if (o.optimizer == "lbfgs") c.optimizer = qdft::OptimizerKind::lbfgs;
  else if (o.optimizer == "spsa") c.optimizer = qdft::OptimizerKind::spsa;
  else if (!o.optimizer.empty()) throw qdft::ConfigError("unknown optimizer '" + o.optimizer + "'");
  if (!o.u_grid.empty()) c.u_grid = o.u_grid;
  if (o.n) c.map_n = *o.n;
  if (o.trials) c.trials = *o.trials;
  if (!o.bundles.empty()) c.bundles = o.bundles;
  if (o.timing) c.timing = true;
  c.validate();
  return c;
}

void write_all(const std::vector<qdft::ResultRecord>& records, const qdft::ExperimentConfig& c,
               const std::string& out) {
  if (records.empty()) return;
  if (out.empty()) {
    qdft::write_results(std::cout, records, qdft::OutputFormat::csv, c.kind);
    return;
  }
  if (std::filesystem::path(out).extension() == ".json") {
    qdft::emit_results(records, qdft::OutputFormat::json, out, c.kind);
    return;
  }
  qdft::emit_results(records, qdft::OutputFormat::csv, out, c.kind);
  const auto json_path = std::filesystem::path(out).replace_extension(".json").string();
  qdft::emit_results(records, qdft::OutputFormat::json, json_path, c.kind);
}

int run(qdft::ExperimentKind kind, const Overrides& o) {
  const auto c = build_config(kind, o);
  if (kind == qdft::ExperimentKind::map_check) {
    const auto records = qdft::run_map_check(c.map_n, c.trials, c.seed);
    if (o.out.empty()) {
      qdft::write_map_check_csv(std::cout, records);
    } else {
      std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot write " + o.out);
      qdft::write_map_check_csv(f, records);
    }
    const auto failed = std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.pass; });
    std::cerr << records.size() - static_cast<std::size_t>(failed) << "/" << records.size()
              << " spectrum checks passed\n";
    return failed == 0 ? 0 : kExitRuntime;
  }
  try {
    write_all(qdft::run_experiment(c), c, o.out);
  } catch (const qdft::ExperimentAborted& e) {
    write_all(e.partial(), c, o.out);
    std::cerr << "qdft: " << e.what() << '\n';
    return kExitDivergence;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kohn-Sham DFT with a simulated ensemble-VQE orbital solver"};
  app.require_subcommand(1);
  Overrides o;

  auto* soft = app.add_subcommand("soft", "Site-occupation KS sweep over U/t on a Hubbard chain");
  add_common(soft, o);
  add_solver(soft, o);
  soft->add_option("--U-grid", o.u_grid, "Comma-separated U/t values")->delimiter(',');

  auto* dft = app.add_subcommand("dft", "Molecular KS-DFT on qdft-bundle-v1 files");
  add_common(dft, o);
  add_solver(dft, o);
  dft->add_option("--bundle", o.bundles, "Bundle file (repeatable)");

  auto* map = app.add_subcommand("map-check", "Spectrum preservation of the aux-Hamiltonian mapping");
  add_common(map, o);
  map->add_option("--N", o.n, "Matrix dimension");
  map->add_option("--trials", o.trials, "Number of random matrices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  spdlog::set_level(spdlog::level::from_str(o.log_level));
  spdlog::set_default_logger(spdlog::stderr_color_mt("qdft"));
  spdlog::set_level(spdlog::level::from_str(o.log_level));

  const auto kind = app.got_subcommand(soft) ? qdft::ExperimentKind::soft_hubbard
                    : app.got_subcommand(dft) ? qdft::ExperimentKind::mol_dft
                                              : qdft::ExperimentKind::map_check;
  try {
    return run(kind, o);
  } catch (const qdft::ConfigError& e) {
    std::cerr << "qdft: invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qdft::BundleError& e) {
    std::cerr << "qdft: bundle: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qdft: " << e.what() << '\n';
    return kExitRuntime;
  }
}
