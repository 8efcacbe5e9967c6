#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qdft/ensemble_vqe.hpp"
#include "qdft/scf.hpp"

namespace qdft {

struct QuantumSolverConfig {
  int layers = 4;
  OptimizerConfig optimizer = QuasiNewtonConfig{};
  /// Shot-sampled estimation when set, exact amplitudes otherwise.
  std::optional<ShotBudget> shots;
  /// Start each KS iteration from the previous optimum (no perturbation).
  bool warm_start = true;
  std::optional<std::vector<std::uint64_t>> index_map;
  std::optional<double> padding;
  /// Root seed; each KS iteration derives its own optimizer and shot streams.
  std::uint64_t seed = 0;
};

/// Orbital solve through the aux-Hamiltonian mapping and ensemble VQE.
/// In sampled mode the energies and the density matrix are estimated from
/// one shared measurement plan over the Hamiltonian strings and the
/// Gamma strings; lattice requests (diagonal only) use Z-basis counts.
class QuantumOrbitalSolver final : public OrbitalSolver {
 public:
  explicit QuantumOrbitalSolver(QuantumSolverConfig config);

  OrbitalSolution solve(const KsMatrix& h, int n_occ, const DensityRequest& request, int scf_iteration) override;
  bool stochastic() const override { return config_.shots.has_value(); }
  std::string name() const override { return stochastic() ? "quantum-sampled" : "quantum-exact"; }

  const QuantumSolverConfig& config() const { return config_; }
  /// Result of the most recent solve.
  const VqeResult& last_result() const { return last_; }

 private:
  QuantumSolverConfig config_;
  std::vector<double> previous_params_;
  VqeResult last_;
};

}  // namespace qdft
