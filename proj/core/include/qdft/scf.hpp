#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdft/aux_mapping.hpp"
#include "qdft/observables.hpp"

namespace qdft {

/// Occupied orbitals of one spin block.
struct OrbitalSolution {
  std::vector<double> energies;  ///< N_occ lowest orbital energies, ascending
  Eigen::MatrixXd density;       ///< sum_k phi_k phi_k^T, one spin block
  int optimizer_iterations = 0;
  bool converged = true;
  std::size_t pauli_terms = 0;
  std::size_t measurement_groups = 0;
  std::vector<double> optimal_params;
};

/// The orbital solve inside the Kohn-Sham loop. Classical diagonalization and
/// the ensemble-VQE path implement the same interface so that both drivers
/// share every other line of the loop.
class OrbitalSolver {
 public:
  virtual ~OrbitalSolver() = default;
  virtual OrbitalSolution solve(const KsMatrix& h, int n_occ, const DensityRequest& request, int scf_iteration) = 0;
  /// Shot-sampled solvers cannot meet a tight convergence threshold.
  virtual bool stochastic() const = 0;
  virtual std::string name() const = 0;
};

struct ScfLimits {
  double mixing = 0.4;
  double tol = 1e-8;
  int max_iterations = 100;
  /// Outer iteration cap for stochastic solvers.
  int stochastic_iterations = 20;
  double divergence_factor = 10.0;
  int divergence_patience = 5;
};

struct ScfState {
  /// Spin-summed output density matrix of the last solve; for lattice models
  /// only the diagonal (site occupations) is meaningful.
  Eigen::MatrixXd density;
  Eigen::VectorXd occupations;
  std::vector<double> orbital_energies;
  /// Hxc part of the KS matrix that produced `density`.
  Eigen::MatrixXd hxc_potential;
  double total_energy = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
  std::vector<double> energy_history;
  std::size_t pauli_terms = 0;
  std::size_t measurement_groups = 0;
};

/// Thrown when the density residual stays above divergence_factor times its
/// first value for divergence_patience consecutive iterations.
class ScfDivergence : public std::runtime_error {
 public:
  ScfDivergence(const std::string& what, ScfState state) : std::runtime_error(what), state_(std::move(state)) {}
  const ScfState& state() const { return state_; }

 private:
  ScfState state_;
};

/// KS matrix built from an input density, plus its Hxc part.
struct KsBuild {
  KsMatrix h;
  Eigen::MatrixXd hxc;
};

/// Problem-specific pieces of the loop.
struct ScfProblem {
  int n_occ = 0;
  Eigen::MatrixXd initial_density;
  std::function<KsBuild(const Eigen::MatrixXd& density)> build;
  std::function<double(const ScfState&)> energy;
  DensityRequest request;
};

/// Linear-mixing Kohn-Sham loop: build -> solve -> density (x2 for spin) ->
/// mix. Converged when max|D_out - D_in| < tol or when the KS matrix built
/// from D_out equals the input one to tol (D_out is then a fixed point).
/// Stochastic solvers stop after `stochastic_iterations`.
ScfState run_scf_loop(const ScfProblem& problem, OrbitalSolver& solver, const ScfLimits& limits);

}  // namespace qdft
