#include "qdft/mol_dft.hpp"

#include <stdexcept>

#include "qdft/observables.hpp"
#include "qdft/xc_svwn.hpp"

namespace qdft {

Eigen::MatrixXd hartree_matrix(const Eigen::MatrixXd& d, const EriTensor& eri) {
  const Eigen::Index n = eri.dim();
  if (d.rows() != n || d.cols() != n) throw std::invalid_argument("hartree_matrix: dimension mismatch");
  // Row-major (pq|rs) viewed as an (N^2 x N^2) matrix acting on vec(D).
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> g(
      eri.data().data(), n * n, n * n);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> dr = d;
  const Eigen::Map<const Eigen::VectorXd> dv(dr.data(), n * n);
  const Eigen::VectorXd jv = g * dv;
  Eigen::MatrixXd j(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) j(p, q) = jv(p * n + q);
  return j;
}

double dft_total_energy(const ScfState& state, const OrthoBasis& basis, const MolBundle& bundle) {
  double e = 0.0;
  for (double eps : state.orbital_energies) e += 2.0 * eps;
  const Eigen::MatrixXd& d = state.density;
  if (state.hxc_potential.size() != 0) e -= (d.cwiseProduct(state.hxc_potential)).sum();
  e += 0.5 * d.cwiseProduct(hartree_matrix(d, basis.eri)).sum();
  if (bundle.grid_weights.size() > 0) {
    const Eigen::VectorXd rho = realspace_density(d, basis.ao_values, 1.0);
    e += xc_svwn(rho, basis.ao_values, bundle.grid_weights).exc;
  }
  return e + bundle.e_nuc;
}

double dft_total_energy(const ScfState& state, const MolBundle& bundle) {
  return dft_total_energy(state, lowdin_orthonormalize(bundle), bundle);
}

ScfState run_dft_scf(const MolBundle& bundle, OrbitalSolver& solver, const ScfLimits& limits) {
  bundle.validate();
  const OrthoBasis basis = lowdin_orthonormalize(bundle);
  const Eigen::Index n = bundle.n_ao;
  ScfProblem problem;
  problem.n_occ = bundle.n_electrons / 2;
  problem.initial_density = Eigen::MatrixXd::Zero(n, n);
  problem.request.pattern = basis.h_core;
  problem.build = [&basis, &bundle](const Eigen::MatrixXd& d) {
    Eigen::MatrixXd hxc = hartree_matrix(d, basis.eri);
    if (bundle.grid_weights.size() > 0) {
      const Eigen::VectorXd rho = realspace_density(d, basis.ao_values, 1.0);
      hxc += xc_svwn(rho, basis.ao_values, bundle.grid_weights).vxc;
    }
    Eigen::MatrixXd f = basis.h_core + hxc;
    f = 0.5 * (f + f.transpose()).eval();
    return KsBuild{KsMatrix(std::move(f)), std::move(hxc)};
  };
  problem.energy = [&basis, &bundle](const ScfState& s) { return dft_total_energy(s, basis, bundle); };
  return run_scf_loop(problem, solver, limits);
}

}  // namespace qdft
