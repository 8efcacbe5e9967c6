#include "qdft/soft_hubbard.hpp"

#include <algorithm>
#include <stdexcept>

#include "qdft/balda.hpp"

namespace qdft {

HubbardSpec HubbardSpec::benchmark(double U) {
  HubbardSpec s;
  s.U = U;
  s.v_ext.resize(static_cast<std::size_t>(s.n_sites));
  for (int i = 0; i < s.n_sites; ++i) s.v_ext[static_cast<std::size_t>(i)] = 0.1 * i;
  return s;
}

void HubbardSpec::validate() const {
  if (n_sites < 2) throw std::invalid_argument("HubbardSpec: need at least two sites");
  if (n_electrons < 2 || n_electrons % 2 != 0 || n_electrons > 2 * n_sites) {
    throw std::invalid_argument("HubbardSpec: electron count must be even and in [2, 2N]");
  }
  if (!(t > 0.0)) throw std::invalid_argument("HubbardSpec: t must be positive");
  if (!(U >= 0.0)) throw std::invalid_argument("HubbardSpec: U must be non-negative");
  if (!v_ext.empty() && v_ext.size() != static_cast<std::size_t>(n_sites)) {
    throw std::invalid_argument("HubbardSpec: v_ext needs one entry per site");
  }
}

KsMatrix build_hubbard_onebody(const HubbardSpec& spec, const Eigen::VectorXd& v_hxc) {
  spec.validate();
  const Eigen::Index n = spec.n_sites;
  if (v_hxc.size() != 0 && v_hxc.size() != n) throw std::invalid_argument("build_hubbard_onebody: v_hxc size");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = -spec.t;
  if (n > 2 && spec.boundary != Boundary::open) {
    const double w = spec.boundary == Boundary::periodic ? -spec.t : spec.t;
    h(0, n - 1) = h(n - 1, 0) = w;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!spec.v_ext.empty()) h(i, i) += spec.v_ext[static_cast<std::size_t>(i)];
    if (v_hxc.size() != 0) h(i, i) += v_hxc(i);
  }
  KsMatrix out(std::move(h));
  for (Eigen::Index i = 0; i < n; ++i) out.basis_labels[static_cast<std::size_t>(i)] = "site" + std::to_string(i + 1);
  return out;
}

namespace {

double clamp_occupation(double n) { return std::clamp(n, 0.0, 2.0); }

}  // namespace

Eigen::VectorXd balda_potential(const HubbardSpec& spec, const Eigen::VectorXd& n) {
  Eigen::VectorXd v(n.size());
  for (Eigen::Index i = 0; i < n.size(); ++i) v(i) = spec.t * balda_hxc(clamp_occupation(n(i)), spec.U / spec.t).v_hxc;
  return v;
}

double soft_total_energy(const ScfState& state, const HubbardSpec& spec) {
  double e = 0.0;
  for (double eps : state.orbital_energies) e += 2.0 * eps;
  const auto& n = state.occupations;
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    e += spec.t * balda_hxc(clamp_occupation(n(i)), spec.U / spec.t).e_hxc;
    if (state.hxc_potential.size() != 0) e -= state.hxc_potential(i, i) * n(i);
  }
  return e;
}

ScfState run_soft_scf(const HubbardSpec& spec, OrbitalSolver& solver, const ScfLimits& limits) {
  spec.validate();
  const Eigen::Index n = spec.n_sites;
  ScfProblem problem;
  problem.n_occ = spec.n_electrons / 2;
  problem.initial_density = Eigen::MatrixXd::Zero(n, n);
  problem.initial_density.diagonal().setConstant(static_cast<double>(spec.n_electrons) / static_cast<double>(n));
  problem.request.diagonal_only = true;
  problem.build = [&spec](const Eigen::MatrixXd& d) {
    const Eigen::VectorXd v = balda_potential(spec, d.diagonal());
    KsBuild b{build_hubbard_onebody(spec, v), Eigen::MatrixXd(v.asDiagonal())};
    return b;
  };
  problem.energy = [&spec](const ScfState& s) { return soft_total_energy(s, spec); };
  return run_scf_loop(problem, solver, limits);
}

}  // namespace qdft
