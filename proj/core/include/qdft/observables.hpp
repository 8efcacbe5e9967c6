#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qdft/ensemble_vqe.hpp"
#include "qdft/statevector.hpp"

namespace qdft {

/// n_I = sum_k |phi_k(I)|^2 for orbitals I < n_logical (one spin block).
/// `orbital_to_basis` maps orbital i to its basis state (identity when
/// empty). Sampled mode measures every state in the Z basis with the full
/// shot budget, state k drawing from derive_key(seed, {k}).
Eigen::VectorXd occupations(std::span<const StateVector> states, Eigen::Index n_logical, const EvaluationMode& mode,
                            std::span<const std::uint64_t> orbital_to_basis = {});

/// <Gamma_IJ> = 2 Re(phi(I) phi(J)) for I != J, and |phi(I)|^2 for I == J.
/// Sampled mode measures the Pauli expansion of Gamma_IJ. Throws
/// std::out_of_range for indices outside the register.
double gamma_element(const StateVector& state, std::uint64_t i, std::uint64_t j, const EvaluationMode& mode);

/// Which off-diagonal elements a sampled density-matrix build measures.
struct DensityRequest {
  /// Only occupations; off-diagonal elements stay zero.
  bool diagonal_only = false;
  /// Measure every off-diagonal pair. Otherwise only pairs where `pattern`
  /// is nonzero (every pair if `pattern` is empty). Exact mode always fills
  /// the full matrix from amplitudes.
  bool dense = false;
  Eigen::MatrixXd pattern;
  double pattern_tol = 1e-12;
};

/// Orbital pairs (i < j) measured in sampled mode under `request`.
std::vector<std::pair<Eigen::Index, Eigen::Index>> measured_pairs(Eigen::Index n_logical,
                                                                  const DensityRequest& request);

/// All Pauli strings (coefficient 1) needed for Gamma_IJ of the listed
/// orbital pairs plus every diagonal projector.
PauliSum gamma_measurement_strings(std::span<const std::pair<Eigen::Index, Eigen::Index>> pairs, Eigen::Index n_logical,
                                   int num_qubits, std::span<const std::uint64_t> orbital_to_basis = {});

/// Reassembles one state's contribution D_ij = phi(i) phi(j) from sampled
/// string expectations.
Eigen::MatrixXd density_from_estimates(const std::map<PauliString, double>& estimates,
                                       std::span<const std::pair<Eigen::Index, Eigen::Index>> pairs,
                                       Eigen::Index n_logical, int num_qubits,
                                       std::span<const std::uint64_t> orbital_to_basis = {});

/// D_ij = sum_k phi_k(i) phi_k(j) (one spin block, trace N_occ). Diagonal
/// from occupations, off-diagonal from Gamma_ij / 2.
Eigen::MatrixXd build_ks_density_matrix(std::span<const StateVector> states, Eigen::Index n_logical,
                                        const EvaluationMode& mode, const DensityRequest& request = {},
                                        std::span<const std::uint64_t> orbital_to_basis = {});

/// n(r_g) = spin_factor * sum_ij chi_i(r_g) D_ij chi_j(r_g), with
/// basis_values of shape (grid points x N). Throws std::invalid_argument on a
/// dimension mismatch.
Eigen::VectorXd realspace_density(const Eigen::MatrixXd& d, const Eigen::MatrixXd& basis_values, double spin_factor);

/// CSV `grid_index,x,y,z,weight,density`; points has shape (G x 3).
void write_density_csv(std::ostream& out, const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                       const Eigen::VectorXd& density);

}  // namespace qdft
