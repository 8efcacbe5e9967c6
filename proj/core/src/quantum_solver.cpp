#include "qdft/quantum_solver.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "qdft/aux_mapping.hpp"
#include "qdft/rng.hpp"

namespace qdft {

QuantumOrbitalSolver::QuantumOrbitalSolver(QuantumSolverConfig config) : config_(std::move(config)) {
  if (config_.layers < 1) throw std::invalid_argument("QuantumOrbitalSolver: need at least one layer");
  if (config_.shots && std::holds_alternative<QuasiNewtonConfig>(config_.optimizer)) {
    throw std::invalid_argument("QuantumOrbitalSolver: quasi-Newton needs exact mode; use SPSA with shots");
  }
}

OrbitalSolution QuantumOrbitalSolver::solve(const KsMatrix& h, int n_occ, const DensityRequest& request,
                                            int scf_iteration) {
  if (n_occ < 1 || n_occ > h.dim()) throw std::invalid_argument("QuantumOrbitalSolver: bad occupied count");
  const AuxHamiltonian aux = map_ks_to_aux(h, config_.index_map, config_.padding);
  const int m = aux.num_qubits;
  const auto it = static_cast<std::uint64_t>(scf_iteration);

  EnsembleSpec spec = EnsembleSpec::standard(m, config_.layers, n_occ);
  for (int k = 0; k < n_occ; ++k) spec.initial_states[static_cast<std::size_t>(k)] = aux.index_map[static_cast<std::size_t>(k)];
  const bool warm = config_.warm_start && previous_params_.size() == spec.ansatz.expected_param_count();
  if (warm) spec.ansatz.params = previous_params_;

  OptimizerConfig opt = config_.optimizer;
  if (auto* qn = std::get_if<QuasiNewtonConfig>(&opt)) {
    qn->seed = derive_key(config_.seed, {it, 1});
    if (warm) qn->init_perturbation = 0.0;
  } else {
    auto& sp = std::get<SpsaConfig>(opt);
    sp.spsa.seed = derive_key(config_.seed, {it, 2});
    if (warm) sp.init_perturbation = 0.0;
  }
  EvaluationMode mode;
  if (config_.shots) {
    ShotBudget b = *config_.shots;
    b.seed = derive_key(config_.seed, {it, 3});
    mode = EvaluationMode::sampled(b);
  }

  last_ = minimize_ensemble(spec, aux, opt, mode);
  previous_params_ = last_.optimal_params;

  OrbitalSolution sol;
  sol.optimizer_iterations = last_.iterations;
  sol.converged = last_.converged;
  sol.pauli_terms = aux.pauli.size();
  sol.measurement_groups = group_commuting(aux.pauli).size();
  sol.optimal_params = last_.optimal_params;

  const Eigen::Index n = h.dim();
  const std::span<const std::uint64_t> o2b(aux.index_map.data(), static_cast<std::size_t>(n));
  if (!mode.is_sampled() || request.diagonal_only) {
    sol.energies = last_.orbital_energies.values;
    EvaluationMode dmode = mode;
    if (mode.is_sampled()) dmode.shots->seed = derive_key(config_.seed, {it, 4});
    sol.density = build_ks_density_matrix(last_.states, n, dmode, request, o2b);
    return sol;
  }

  // One plan over the Hamiltonian and Gamma strings; energies and density
  // come from the same counts.
  const auto pairs = measured_pairs(n, request);
  PauliSum strings = gamma_measurement_strings(pairs, n, m, o2b);
  for (const auto& [p, c] : aux.pauli.terms()) {
    if (strings.coefficient(p) == cplx{}) strings.add(p, 1.0);
  }
  ShotBudget b = *mode.shots;
  b.seed = derive_key(config_.seed, {it, 4});
  const MeasurementPlan plan = make_measurement_plan(strings, b);
  std::vector<double> e(last_.states.size());
  sol.density = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < last_.states.size(); ++k) {
    const auto est = sample_plan(last_.states[k], plan, derive_key(b.seed, {k}));
    double ek = 0.0;
    for (const auto& [p, c] : aux.pauli.terms()) {
      ek += c.real() * (p.is_identity() ? 1.0 : est.at(p));
    }
    e[k] = ek;
    sol.density += density_from_estimates(est, pairs, n, m, o2b);
  }
  std::sort(e.begin(), e.end());
  sol.energies = std::move(e);
  return sol;
}

}  // namespace qdft
