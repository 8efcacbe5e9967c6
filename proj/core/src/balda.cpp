#include "qdft/balda.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

namespace qdft {

namespace {

constexpr double kPi = std::numbers::pi;

// Panel width of one period of J0(x) J1(x) ~ -cos(2x) / (pi x).
constexpr double kPanel = kPi;

}  // namespace

double lieb_wu_integral(double u) {
  if (!(u >= 0.0)) throw std::invalid_argument("lieb_wu_integral: u must be non-negative");
  if (u == 0.0) return 1.0 / kPi;
  const auto f = [u](double x) {
    if (x < 1e-8) return 0.5 / (1.0 + std::exp(0.5 * u * x));  // J0 J1 / x -> 1/2
    const double bessel = boost::math::cyl_bessel_j(0, x) * boost::math::cyl_bessel_j(1, x) / x;
    return bessel / (1.0 + std::exp(0.5 * u * x));
  };
  const auto fermi = [u](double x) { return 1.0 / (1.0 + std::exp(0.5 * u * x)); };
  double total = 0.0;
  constexpr int kMaxPanels = 2'000'000;
  for (int k = 0; k < kMaxPanels; ++k) {
    const double a = k * kPanel;
    const double b = a + kPanel;
    total += boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
    if (b <= 10.0) continue;
    // |integrand| <= exp(-u x / 2) / (pi x^2) beyond x ~ 10; integrate the bound.
    if (std::exp(-0.5 * u * b) * 2.0 / (kPi * u * b * b) < 1e-17) break;
    // Small u: J0 J1 / x = -cos(2x) / (pi x^2) + 1 / (2 pi x^3) + ..., and
    // whole panels cancel the oscillation, so only the smooth term is left
    // to add, up to O(1 / b^3).
    if (fermi(b) / (kPi * b * b * b) < 1e-15) {
      boost::math::quadrature::exp_sinh<double> tail;
      total += tail.integrate([&](double x) { return fermi(x) / (2.0 * kPi * x * x * x); }, b,
                              std::numeric_limits<double>::infinity());
      break;
    }
  }
  return total;
}

double balda_beta(double u) {
  if (!(u >= 0.0)) throw std::invalid_argument("balda_beta: u must be non-negative");
  if (u == 0.0) return 2.0;
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(u); it != cache.end()) return it->second;
  }
  const double target = 4.0 * lieb_wu_integral(u);
  const auto g = [target](double beta) { return 2.0 * beta / kPi * std::sin(kPi / beta) - target; };
  double beta = 1.0;
  if (g(1.0) < 0.0 && g(2.0) > 0.0) {
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] =
        boost::math::tools::toms748_solve(g, 1.0, 2.0, boost::math::tools::eps_tolerance<double>(52), max_iter);
    beta = 0.5 * (lo + hi);
  } else if (g(2.0) <= 0.0) {
    beta = 2.0;
  }
  std::lock_guard lock(mutex);
  cache.emplace(u, beta);
  return beta;
}

double balda_energy_per_site(double n, double u) {
  if (!(n >= 0.0 && n <= 2.0)) throw std::invalid_argument("balda_energy_per_site: n outside [0, 2]");
  const double beta = balda_beta(u);
  if (n <= 1.0) return -2.0 * beta / kPi * std::sin(kPi * n / beta);
  const double h = 2.0 - n;
  return -2.0 * beta / kPi * std::sin(kPi * h / beta) + u * (n - 1.0);
}

HxcFunctionalOutput balda_hxc(double n, double u) {
  if (!(n >= 0.0 && n <= 2.0)) throw std::invalid_argument("balda_hxc: n outside [0, 2]");
  if (!(u >= 0.0)) throw std::invalid_argument("balda_hxc: u must be non-negative");
  if (u == 0.0) return {};
  const double beta = balda_beta(u);
  HxcFunctionalOutput out;
  out.e_hxc = balda_energy_per_site(n, u) - balda_energy_per_site(n, 0.0);
  if (n <= 1.0) {
    out.v_hxc = -2.0 * std::cos(kPi * n / beta) + 2.0 * std::cos(kPi * n / 2.0);
  } else {
    const double h = 2.0 - n;
    out.v_hxc = 2.0 * std::cos(kPi * h / beta) - 2.0 * std::cos(kPi * h / 2.0) + u;
  }
  return out;
}

}  // namespace qdft
