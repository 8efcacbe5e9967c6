#pragma once

#include <Eigen/Dense>

#include "qdft/mol_bundle.hpp"
#include "qdft/scf.hpp"

namespace qdft {

/// J_pq = sum_rs D_rs (pq|rs) for a spin-summed density matrix D. Throws
/// std::invalid_argument on a dimension mismatch.
Eigen::MatrixXd hartree_matrix(const Eigen::MatrixXd& d, const EriTensor& eri);

/// E = 2 sum_k eps_k - Tr(D V_hxc,in) + 1/2 Tr(D J[D]) + E_xc[rho] + E_nuc,
/// with D the output density and V_hxc,in the Hartree + xc matrix that
/// produced the orbitals. At self-consistency this equals the usual
/// Tr(D h) + 1/2 Tr(D J) + E_xc + E_nuc.
double dft_total_energy(const ScfState& state, const OrthoBasis& basis, const MolBundle& bundle);
double dft_total_energy(const ScfState& state, const MolBundle& bundle);

/// Restricted KS loop in the Lowdin basis, starting from D = 0 (core guess).
/// The density request measures the off-diagonal pairs where the core
/// Hamiltonian is nonzero.
ScfState run_dft_scf(const MolBundle& bundle, OrbitalSolver& solver, const ScfLimits& limits = {});

}  // namespace qdft
