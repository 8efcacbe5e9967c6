#pragma once

#include <Eigen/Dense>

#include "qdft/aux_mapping.hpp"
#include "qdft/mol_dft.hpp"
#include "qdft/scf.hpp"
#include "qdft/soft_hubbard.hpp"

namespace qdft {

struct EigenSolution {
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< columns, orthonormal
};

/// Dense symmetric eigensolver. Each eigenvector is signed so that its
/// largest-magnitude component (first one on ties) is positive. Throws
/// std::invalid_argument for a non-symmetric matrix.
EigenSolution diagonalize(const KsMatrix& h);

/// Orbital solve by direct diagonalization.
class ClassicalOrbitalSolver final : public OrbitalSolver {
 public:
  OrbitalSolution solve(const KsMatrix& h, int n_occ, const DensityRequest& request, int scf_iteration) override;
  bool stochastic() const override { return false; }
  std::string name() const override { return "classical"; }
};

/// The lattice and molecular drivers with the classical orbital solve.
ScfState classical_scf(const HubbardSpec& spec, const ScfLimits& limits = {});
ScfState classical_scf(const MolBundle& bundle, const ScfLimits& limits = {});

}  // namespace qdft
