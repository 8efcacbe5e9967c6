#pragma once

namespace qdft {

/// Lieb-Wu half-filling integral
///   I(u) = int_0^inf J0(x) J1(x) / (x (1 + exp(u x / 2))) dx,
/// so that the half-filled chain has energy -4 t I(U/t) per site. I(0) = 1/pi.
/// Throws std::invalid_argument for u < 0.
double lieb_wu_integral(double u);

/// BALDA interaction parameter beta(u) in [1, 2]: the root of
///   (2 beta / pi) sin(pi / beta) = 4 I(u),
/// which makes the BALDA energy exact at half filling. beta(0) = 2 and
/// beta -> 1 as u -> infinity. Results are cached per u (thread-safe).
double balda_beta(double u);

/// Homogeneous-chain energy per site in units of t:
///   e(n) = -(2 beta / pi) sin(pi n / beta)   for n <= 1,
///   e(n) = e(2 - n) + u (n - 1)               for n > 1.
/// Throws std::invalid_argument for n outside [0, 2] or u < 0.
double balda_energy_per_site(double n, double u);

/// Hxc energy per site and its density derivative, units of t.
struct HxcFunctionalOutput {
  double e_hxc = 0.0;
  double v_hxc = 0.0;
};

/// e_hxc(n, u) = e(n, u) - e(n, 0) and v_hxc = d e_hxc / dn. At n = 1 the
/// derivative jumps; the value returned there is the n -> 1^- branch.
HxcFunctionalOutput balda_hxc(double n, double u);

}  // namespace qdft
