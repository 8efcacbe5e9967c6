#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdft/scf.hpp"
#include "qdft/statevector.hpp"

namespace qdft {

enum class ExperimentKind { soft_hubbard, mol_dft, map_check };
enum class SolverKind { classical, quantum_exact, quantum_sampled };
enum class OptimizerKind { lbfgs, spsa };

const char* to_string(ExperimentKind kind);
const char* to_string(SolverKind kind);
const char* to_string(OptimizerKind kind);

/// Inverse of to_string(SolverKind); throws ConfigError.
SolverKind parse_solver(const std::string& text);

/// Invalid configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::soft_hubbard;
  SolverKind solver = SolverKind::classical;
  std::uint64_t shots = 1'000'000;
  ShotAllocation allocation = ShotAllocation::per_group;
  std::uint64_t seed = 0;
  int layers = 4;
  /// Defaults to L-BFGS for quantum-exact and SPSA for quantum-sampled.
  std::optional<OptimizerKind> optimizer;
  int spsa_iterations = 5000;
  ScfLimits limits;

  // soft-hubbard
  std::vector<double> u_grid{0, 1, 2, 4, 6, 8, 10};
  int n_sites = 8;
  int n_electrons = 4;
  double t = 1.0;
  /// v_i = v_slope * (i - 1).
  double v_slope = 0.1;
  std::string boundary = "antiperiodic";

  // mol-dft
  std::vector<std::string> bundles;

  // map-check
  int map_n = 8;
  int trials = 50;

  /// Adds a wall_time_s column; off by default so reruns are byte-identical.
  bool timing = false;

  OptimizerKind effective_optimizer() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Reads a JSON config; unknown keys and ill-typed values raise ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct ResultRecord {
  std::string sweep;  ///< U/t value or bundle name
  double sweep_value = 0.0;
  SolverKind solver = SolverKind::classical;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double e0 = 0.0;
  double e0_classical = 0.0;
  double abs_error = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> orbital_energies;
  std::vector<double> occupations;
  std::size_t pauli_terms = 0;
  std::size_t measurement_groups = 0;
  std::optional<double> wall_time_s;

  bool operator==(const ResultRecord&) const = default;
};

struct MapCheckRecord {
  int trial = 0;
  int n = 0;
  int num_qubits = 0;
  double max_error = 0.0;
  bool pass = false;
};

/// Runtime divergence during a sweep; carries the records finished so far.
class ExperimentAborted : public std::runtime_error {
 public:
  ExperimentAborted(const std::string& what, std::vector<ResultRecord> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::vector<ResultRecord>& partial() const { return partial_; }

 private:
  std::vector<ResultRecord> partial_;
};

/// Runs a soft-hubbard or mol-dft sweep point by point, with the classical
/// baseline alongside each point. Point i uses seed + i.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

/// Spectrum-preservation checks on random symmetric matrices.
std::vector<MapCheckRecord> run_map_check(int n, int trials, std::uint64_t seed, double tol = 1e-10);

enum class OutputFormat { csv, json };

/// CSV: `U_over_t,solver,shots,seed,E0,E0_classical,abs_error,iterations`
/// (first column `bundle` for molecular sweeps), floats at 12 significant
/// digits. JSON: full records with round-trip precision.
void write_results(std::ostream& out, const std::vector<ResultRecord>& records, OutputFormat format,
                   ExperimentKind kind);
/// Throws std::runtime_error for an empty record list or an unwritable path.
void emit_results(const std::vector<ResultRecord>& records, OutputFormat format, const std::string& path,
                  ExperimentKind kind);

nlohmann::json records_to_json(const std::vector<ResultRecord>& records, ExperimentKind kind);
std::vector<ResultRecord> records_from_json(const nlohmann::json& doc);

void write_map_check_csv(std::ostream& out, const std::vector<MapCheckRecord>& records);

}  // namespace qdft
