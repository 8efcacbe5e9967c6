#include "qdft/reference.hpp"

#include <stdexcept>

namespace qdft {

EigenSolution diagonalize(const KsMatrix& h) {
  if (h.h.rows() != h.h.cols()) throw std::invalid_argument("diagonalize: matrix is not square");
  if (h.h.size() > 0 && (h.h - h.h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.h.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("diagonalize: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.h);
  if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed");
  EigenSolution out{es.eigenvalues(), es.eigenvectors()};
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < out.eigenvectors.rows(); ++r) {
      // Ties within rounding resolve to the first index.
      if (std::abs(out.eigenvectors(r, c)) > best + 1e-12) {
        best = std::abs(out.eigenvectors(r, c));
        arg = r;
      }
    }
    if (out.eigenvectors(arg, c) < 0.0) out.eigenvectors.col(c) *= -1.0;
  }
  return out;
}

OrbitalSolution ClassicalOrbitalSolver::solve(const KsMatrix& h, int n_occ, const DensityRequest&, int) {
  if (n_occ < 1 || n_occ > h.dim()) throw std::invalid_argument("ClassicalOrbitalSolver: bad occupied count");
  const auto eig = diagonalize(h);
  OrbitalSolution sol;
  sol.energies.assign(eig.eigenvalues.data(), eig.eigenvalues.data() + n_occ);
  const auto occ = eig.eigenvectors.leftCols(n_occ);
  sol.density = occ * occ.transpose();
  return sol;
}

ScfState classical_scf(const HubbardSpec& spec, const ScfLimits& limits) {
  ClassicalOrbitalSolver solver;
  return run_soft_scf(spec, solver, limits);
}

ScfState classical_scf(const MolBundle& bundle, const ScfLimits& limits) {
  ClassicalOrbitalSolver solver;
  return run_dft_scf(bundle, solver, limits);
}

}  // namespace qdft
