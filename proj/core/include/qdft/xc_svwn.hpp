#pragma once

#include <Eigen/Dense>

namespace qdft {

/// Energy density per particle and potential of the spin-unpolarized
/// Slater + VWN (parametrization V) functional, hartree.
struct LdaPoint {
  double eps_xc = 0.0;
  double v_xc = 0.0;
};

LdaPoint slater_exchange(double rho);
LdaPoint vwn5_correlation(double rho);
/// Densities below 1e-14 bohr^-3 contribute nothing.
LdaPoint svwn(double rho);

struct XcResult {
  double exc = 0.0;
  Eigen::MatrixXd vxc;
};

/// E_xc = sum_g w_g rho_g eps_xc(rho_g) and
/// V_pq = sum_g w_g chi_p(r_g) v_xc(rho_g) chi_q(r_g); densities below zero
/// are clamped. Throws std::invalid_argument on a size mismatch.
XcResult xc_svwn(const Eigen::VectorXd& rho, const Eigen::MatrixXd& ao_values, const Eigen::VectorXd& weights);

}  // namespace qdft
