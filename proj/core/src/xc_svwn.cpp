#include "qdft/xc_svwn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdft {

namespace {

constexpr double kRhoFloor = 1e-14;

// VWN5 paramagnetic fit.
constexpr double kA = 0.0310907;
constexpr double kB = 3.72744;
constexpr double kC = 12.9352;
constexpr double kX0 = -0.10498;

}  // namespace

LdaPoint slater_exchange(double rho) {
  if (rho < kRhoFloor) return {};
  const double cx = 0.75 * std::cbrt(3.0 / std::numbers::pi);
  const double eps = -cx * std::cbrt(rho);
  return {eps, 4.0 / 3.0 * eps};
}

LdaPoint vwn5_correlation(double rho) {
  if (rho < kRhoFloor) return {};
  const double rs = std::cbrt(3.0 / (4.0 * std::numbers::pi * rho));
  const double x = std::sqrt(rs);
  const double xx = x * x + kB * x + kC;
  const double xx0 = kX0 * kX0 + kB * kX0 + kC;
  const double q = std::sqrt(4.0 * kC - kB * kB);
  const double at = std::atan(q / (2.0 * x + kB));
  const double eps = kA * (std::log(x * x / xx) + 2.0 * kB / q * at -
                           kB * kX0 / xx0 * (std::log((x - kX0) * (x - kX0) / xx) + 2.0 * (kB + 2.0 * kX0) / q * at));
  // d/dx of 2/Q atan(Q/(2x+b)) is -4/((2x+b)^2+Q^2) = -1/X.
  const double deps_dx =
      kA * (2.0 / x - (2.0 * x + kB) / xx - kB / xx -
            kB * kX0 / xx0 * (2.0 / (x - kX0) - (2.0 * x + kB) / xx - (kB + 2.0 * kX0) / xx));
  return {eps, eps - x / 6.0 * deps_dx};
}

LdaPoint svwn(double rho) {
  const auto ex = slater_exchange(rho);
  const auto ec = vwn5_correlation(rho);
  return {ex.eps_xc + ec.eps_xc, ex.v_xc + ec.v_xc};
}

XcResult xc_svwn(const Eigen::VectorXd& rho, const Eigen::MatrixXd& ao_values, const Eigen::VectorXd& weights) {
  if (rho.size() != weights.size() || ao_values.rows() != rho.size()) {
    throw std::invalid_argument("xc_svwn: grid sizes differ");
  }
  XcResult out;
  Eigen::VectorXd wv(rho.size());
  for (Eigen::Index g = 0; g < rho.size(); ++g) {
    const double r = std::max(rho(g), 0.0);
    const auto p = svwn(r);
    out.exc += weights(g) * r * p.eps_xc;
    wv(g) = weights(g) * p.v_xc;
  }
  out.vxc = ao_values.transpose() * wv.asDiagonal() * ao_values;
  return out;
}

}  // namespace qdft
