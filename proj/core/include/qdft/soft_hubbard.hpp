#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qdft/aux_mapping.hpp"
#include "qdft/scf.hpp"

namespace qdft {

enum class Boundary { open, periodic, antiperiodic };

/// Inhomogeneous 1D Hubbard chain, energies in units of t.
struct HubbardSpec {
  int n_sites = 8;
  int n_electrons = 4;
  double t = 1.0;
  double U = 0.0;
  std::vector<double> v_ext;
  Boundary boundary = Boundary::antiperiodic;

  /// N = 8, N_e = 4, t = 1, v_i = (i - 1) / 10, antiperiodic.
  static HubbardSpec benchmark(double U);

  /// Throws std::invalid_argument for fewer than two sites, an odd or
  /// out-of-range electron count, t <= 0, U < 0, or a v_ext size mismatch.
  void validate() const;
};

/// h_ij = -t on nearest neighbours, v_ext_i + v_hxc_i on the diagonal; the
/// wrap-around bond carries -t (periodic) or +t (antiperiodic).
KsMatrix build_hubbard_onebody(const HubbardSpec& spec, const Eigen::VectorXd& v_hxc);

/// Per-site BALDA potential for spin-summed occupations, scaled to t.
Eigen::VectorXd balda_potential(const HubbardSpec& spec, const Eigen::VectorXd& n);

/// E = 2 sum_k eps_k + sum_i e_hxc(n_i) - sum_i v_hxc_i n_i with the
/// potential that produced the orbitals (state.hxc_potential diagonal).
double soft_total_energy(const ScfState& state, const HubbardSpec& spec);

/// Site-occupation KS loop starting from the uniform density N_e / N.
ScfState run_soft_scf(const HubbardSpec& spec, OrbitalSolver& solver, const ScfLimits& limits = {});

}  // namespace qdft
