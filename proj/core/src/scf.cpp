#include "qdft/scf.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

namespace qdft {

ScfState run_scf_loop(const ScfProblem& problem, OrbitalSolver& solver, const ScfLimits& limits) {
  if (!(limits.mixing > 0.0 && limits.mixing <= 1.0)) throw std::invalid_argument("run_scf_loop: mixing outside (0, 1]");
  ScfState state;
  Eigen::MatrixXd d_in = problem.initial_density;
  const int cap = solver.stochastic() ? limits.stochastic_iterations : limits.max_iterations;
  double first_residual = -1.0;
  int above = 0;

  for (int it = 1; it <= cap; ++it) {
    const KsBuild ks = problem.build(d_in);
    OrbitalSolution sol = solver.solve(ks.h, problem.n_occ, problem.request, it);
    const Eigen::MatrixXd d_out = 2.0 * sol.density;

    const double residual = (d_out - d_in).cwiseAbs().maxCoeff();
    const double potential_change = (problem.build(d_out).h.h - ks.h.h).cwiseAbs().maxCoeff();

    state.density = d_out;
    state.occupations = d_out.diagonal();
    state.orbital_energies = std::move(sol.energies);
    state.hxc_potential = ks.hxc;
    state.iterations = it;
    state.residual = residual;
    state.pauli_terms = sol.pauli_terms;
    state.measurement_groups = sol.measurement_groups;
    state.total_energy = problem.energy(state);
    state.residual_history.push_back(residual);
    state.energy_history.push_back(state.total_energy);
    spdlog::debug("scf[{}] it={} residual={:.3e} dv={:.3e} E={:.12f}", solver.name(), it, residual,
                  potential_change, state.total_energy);

    if (!solver.stochastic() && (residual < limits.tol || potential_change < limits.tol)) {
      state.converged = true;
      break;
    }
    if (first_residual < 0.0) first_residual = residual;
    above = residual > limits.divergence_factor * first_residual ? above + 1 : 0;
    if (above >= limits.divergence_patience) {
      throw ScfDivergence("SCF diverged: residual " + std::to_string(residual) + " after " + std::to_string(it) +
                              " iterations (first residual " + std::to_string(first_residual) + ")",
                          state);
    }
    d_in = limits.mixing * d_out + (1.0 - limits.mixing) * d_in;
  }
  return state;
}

}  // namespace qdft
