#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qdft/aux_mapping.hpp"
#include "qdft/optimizers.hpp"
#include "qdft/statevector.hpp"

namespace qdft {

/// w_k = (1 + N_occ - k) / (N_occ (N_occ + 1) / 2), k = 1..N_occ.
/// Throws std::invalid_argument for n_occ < 1.
std::vector<double> ensemble_weights(int n_occ);

/// Ensemble of N_occ basis states driven through one shared ansatz.
struct EnsembleSpec {
  std::vector<double> weights;
  std::vector<std::uint64_t> initial_states;
  AnsatzSpec ansatz;

  std::size_t size() const { return weights.size(); }

  /// Linearly decreasing weights, initial states |0>, |1>, ..., zero angles.
  static EnsembleSpec standard(int num_qubits, int layers, int n_occ);

  /// Throws std::invalid_argument unless weights strictly decrease, are
  /// positive and sum to one, and initial states are distinct and in range.
  void validate() const;
};

/// Exact amplitudes when `shots` is empty, shot sampling otherwise.
struct EvaluationMode {
  std::optional<ShotBudget> shots;

  static EvaluationMode exact() { return {}; }
  static EvaluationMode sampled(ShotBudget budget) { return {budget}; }
  bool is_sampled() const { return shots.has_value(); }
};

/// sum_k w_k <phi_k(theta)|H|phi_k(theta)>. In sampled mode every state gets
/// the full shot budget, state k drawing from derive_key(seed, {k}).
double ensemble_energy(const EnsembleSpec& spec, const AuxHamiltonian& h, const EvaluationMode& mode);

struct QuasiNewtonConfig {
  LbfgsOptions lbfgs{};
  /// Extra attempts with fresh perturbations when a run does not converge.
  int restarts = 3;
  /// Independent starts always performed; the lowest energy wins.
  int starts = 1;
  /// Start point is the ansatz angles plus U[-p, p] noise.
  double init_perturbation = 0.1;
  std::uint64_t seed = 0;
};

struct SpsaConfig {
  SpsaOptions spsa{};
  double init_perturbation = 0.1;
};

using OptimizerConfig = std::variant<QuasiNewtonConfig, SpsaConfig>;

struct OrbitalEnergies {
  std::vector<double> values;             ///< ascending
  std::vector<std::size_t> state_of_rank; ///< values[r] came from state state_of_rank[r]
};

struct VqeResult {
  std::vector<double> optimal_params;
  std::vector<StateVector> states;     ///< in weight order
  std::vector<double> state_energies;  ///< <phi_k|H|phi_k> in weight order
  OrbitalEnergies orbital_energies;
  double ensemble_energy = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int attempts = 0;
  bool converged = false;
};

/// Minimizes the ensemble energy. Quasi-Newton (L-BFGS with parameter-shift
/// gradients) needs exact mode; SPSA runs in either mode. Non-convergence is
/// reported through `converged`, not thrown.
VqeResult minimize_ensemble(const EnsembleSpec& spec, const AuxHamiltonian& h, const OptimizerConfig& optimizer,
                            const EvaluationMode& mode, const TraceSink& trace = {});

/// Per-state energies of `result.states` sorted ascending, with the
/// rank -> state mapping. Sampled mode draws from derive_key(seed, {k}).
OrbitalEnergies extract_orbital_energies(const VqeResult& result, const AuxHamiltonian& h,
                                         const EvaluationMode& mode = EvaluationMode::exact());

}  // namespace qdft
