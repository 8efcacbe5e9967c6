#include "qdft/ensemble_vqe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qdft/rng.hpp"

namespace qdft {

std::vector<double> ensemble_weights(int n_occ) {
  if (n_occ < 1) throw std::invalid_argument("ensemble_weights: need at least one state");
  const double norm = 0.5 * n_occ * (n_occ + 1);
  std::vector<double> w(static_cast<std::size_t>(n_occ));
  for (int k = 1; k <= n_occ; ++k) w[static_cast<std::size_t>(k - 1)] = (1.0 + n_occ - k) / norm;
  return w;
}

EnsembleSpec EnsembleSpec::standard(int num_qubits, int layers, int n_occ) {
  EnsembleSpec s;
  s.weights = ensemble_weights(n_occ);
  s.initial_states.resize(static_cast<std::size_t>(n_occ));
  std::iota(s.initial_states.begin(), s.initial_states.end(), std::uint64_t{0});
  s.ansatz = AnsatzSpec::zeros(num_qubits, layers);
  return s;
}

void EnsembleSpec::validate() const {
  if (weights.empty()) throw std::invalid_argument("EnsembleSpec: empty ensemble");
  if (weights.size() != initial_states.size()) {
    throw std::invalid_argument("EnsembleSpec: one initial state per weight required");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0)) throw std::invalid_argument("EnsembleSpec: weights must be positive");
    if (k > 0 && !(weights[k] < weights[k - 1])) {
      throw std::invalid_argument("EnsembleSpec: weights must strictly decrease");
    }
    sum += weights[k];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("EnsembleSpec: weights must sum to one");
  const std::uint64_t dim = std::uint64_t{1} << ansatz.num_qubits;
  for (std::size_t k = 0; k < initial_states.size(); ++k) {
    if (initial_states[k] >= dim) throw std::invalid_argument("EnsembleSpec: initial state out of range");
    for (std::size_t l = 0; l < k; ++l) {
      if (initial_states[l] == initial_states[k]) {
        throw std::invalid_argument("EnsembleSpec: initial states must be distinct");
      }
    }
  }
  if (ansatz.params.size() != ansatz.expected_param_count()) {
    throw std::invalid_argument("EnsembleSpec: ansatz parameter count must be M(N_L+1)");
  }
}

namespace {

void check_dims(const EnsembleSpec& spec, const AuxHamiltonian& h) {
  if (spec.ansatz.num_qubits != h.num_qubits || h.pauli.num_qubits() != h.num_qubits) {
    throw std::invalid_argument("ensemble: ansatz and Hamiltonian qubit counts differ");
  }
}

double state_energy(const StateVector& psi, const AuxHamiltonian& h, const EvaluationMode& mode,
                    const std::optional<MeasurementPlan>& plan, std::uint64_t key) {
  if (!mode.is_sampled()) return expectation_exact(psi, h.pauli);
  return estimate_expectation_sampled(psi, h.pauli, *plan, key);
}

double weighted_energy(const EnsembleSpec& spec, std::span<const double> params, const AuxHamiltonian& h,
                       const EvaluationMode& mode, const std::optional<MeasurementPlan>& plan, std::uint64_t key) {
  AnsatzSpec ansatz{spec.ansatz.num_qubits, spec.ansatz.layers, {params.begin(), params.end()}};
  double e = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const auto psi = run_ry_ansatz(ansatz, spec.initial_states[k]);
    e += spec.weights[k] * state_energy(psi, h, mode, plan, derive_key(key, {k}));
  }
  return e;
}

std::vector<double> perturbed(const std::vector<double>& base, double amplitude, std::uint64_t key) {
  CounterRng rng(key);
  std::vector<double> x = base;
  for (auto& v : x) v += amplitude * (2.0 * rng.uniform() - 1.0);
  return x;
}

VqeResult finish(const EnsembleSpec& spec, const AuxHamiltonian& h, const EvaluationMode& mode,
                 std::vector<double> params) {
  VqeResult r;
  r.optimal_params = std::move(params);
  AnsatzSpec ansatz{spec.ansatz.num_qubits, spec.ansatz.layers, r.optimal_params};
  for (auto s : spec.initial_states) r.states.push_back(run_ry_ansatz(ansatz, s));
  std::optional<MeasurementPlan> plan;
  if (mode.is_sampled()) plan = make_measurement_plan(h.pauli, *mode.shots);
  const std::uint64_t key = mode.is_sampled() ? derive_key(mode.shots->seed, {0xf1a1ULL}) : 0;
  r.ensemble_energy = 0.0;
  for (std::size_t k = 0; k < r.states.size(); ++k) {
    r.state_energies.push_back(state_energy(r.states[k], h, mode, plan, derive_key(key, {k})));
    r.ensemble_energy += spec.weights[k] * r.state_energies.back();
  }
  std::vector<std::size_t> order(r.states.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.state_energies[a] < r.state_energies[b]; });
  for (auto k : order) r.orbital_energies.values.push_back(r.state_energies[k]);
  r.orbital_energies.state_of_rank = std::move(order);
  return r;
}

}  // namespace

double ensemble_energy(const EnsembleSpec& spec, const AuxHamiltonian& h, const EvaluationMode& mode) {
  spec.validate();
  check_dims(spec, h);
  std::optional<MeasurementPlan> plan;
  if (mode.is_sampled()) plan = make_measurement_plan(h.pauli, *mode.shots);
  return weighted_energy(spec, spec.ansatz.params, h, mode, plan, mode.is_sampled() ? mode.shots->seed : 0);
}

VqeResult minimize_ensemble(const EnsembleSpec& spec, const AuxHamiltonian& h, const OptimizerConfig& optimizer,
                            const EvaluationMode& mode, const TraceSink& trace) {
  spec.validate();
  check_dims(spec, h);

  if (const auto* qn = std::get_if<QuasiNewtonConfig>(&optimizer)) {
    if (mode.is_sampled()) throw std::invalid_argument("minimize_ensemble: quasi-Newton needs exact mode");
    const auto objective = [&](std::span<const double> x, std::span<double> grad) {
      AnsatzSpec ansatz{spec.ansatz.num_qubits, spec.ansatz.layers, {x.begin(), x.end()}};
      std::fill(grad.begin(), grad.end(), 0.0);
      double e = 0.0;
      for (std::size_t k = 0; k < spec.size(); ++k) {
        e += spec.weights[k] * expectation_exact(run_ry_ansatz(ansatz, spec.initial_states[k]), h.pauli);
        const auto gk = gradient_parameter_shift(ansatz, spec.initial_states[k], h.pauli);
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += spec.weights[k] * gk[j];
      }
      return e;
    };

    std::optional<OptimizeResult> best;
    int attempts = 0;
    int total_iterations = 0;
    int total_evals = 0;
    const int max_attempts = std::max(1, qn->starts) + std::max(0, qn->restarts);
    while (attempts < max_attempts) {
      const auto x0 = perturbed(spec.ansatz.params, qn->init_perturbation,
                                derive_key(qn->seed, {static_cast<std::uint64_t>(attempts)}));
      auto run = minimize_lbfgs(objective, x0, qn->lbfgs, attempts == 0 ? trace : TraceSink{});
      ++attempts;
      total_iterations += run.iterations;
      total_evals += run.evaluations;
      const bool better = !best || (run.converged && !best->converged) ||
                          (run.converged == best->converged && run.value < best->value);
      if (better) best = std::move(run);
      if (attempts >= std::max(1, qn->starts) && best->converged) break;
    }
    auto r = finish(spec, h, mode, best->x);
    r.iterations = total_iterations;
    r.evaluations = total_evals;
    r.attempts = attempts;
    r.converged = best->converged;
    return r;
  }

  const auto& sp = std::get<SpsaConfig>(optimizer);
  std::optional<MeasurementPlan> plan;
  if (mode.is_sampled()) plan = make_measurement_plan(h.pauli, *mode.shots);
  const std::uint64_t base_key = mode.is_sampled() ? mode.shots->seed : 0;
  const auto objective = [&](std::span<const double> x, std::uint64_t evaluation) {
    return weighted_energy(spec, x, h, mode, plan, derive_key(base_key, {evaluation}));
  };
  const auto x0 = perturbed(spec.ansatz.params, sp.init_perturbation, derive_key(sp.spsa.seed, {0x5eedULL}));
  auto run = minimize_spsa(objective, x0, sp.spsa, trace);
  auto r = finish(spec, h, mode, run.x);
  r.iterations = run.iterations;
  r.evaluations = run.evaluations;
  r.attempts = 1;
  r.converged = run.converged;
  return r;
}

OrbitalEnergies extract_orbital_energies(const VqeResult& result, const AuxHamiltonian& h,
                                         const EvaluationMode& mode) {
  std::optional<MeasurementPlan> plan;
  if (mode.is_sampled()) plan = make_measurement_plan(h.pauli, *mode.shots);
  std::vector<double> e;
  for (std::size_t k = 0; k < result.states.size(); ++k) {
    e.push_back(state_energy(result.states[k], h, mode, plan,
                             mode.is_sampled() ? derive_key(mode.shots->seed, {k}) : 0));
  }
  OrbitalEnergies out;
  out.state_of_rank.resize(e.size());
  std::iota(out.state_of_rank.begin(), out.state_of_rank.end(), std::size_t{0});
  std::stable_sort(out.state_of_rank.begin(), out.state_of_rank.end(),
                   [&](std::size_t a, std::size_t b) { return e[a] < e[b]; });
  for (auto k : out.state_of_rank) out.values.push_back(e[k]);
  return out;
}

}  // namespace qdft
