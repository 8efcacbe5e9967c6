#include "qdft/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>

#include "qdft/rng.hpp"

namespace qdft {

TraceSink csv_trace_sink(std::ostream& out, const char* metric_name) {
  out << "iteration,ensemble_energy," << metric_name << '\n';
  return [&out](const TraceRow& row) {
    const auto old = out.precision(12);
    out << row.iteration << ',' << row.ensemble_energy << ',' << row.step_metric << '\n';
    out.precision(old);
  };
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }
double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative
  Vec x;
  Vec g;
};

class LineSearch {
 public:
  LineSearch(const ValueAndGradient& f, const Vec& x0, double f0, const Vec& g0, const Vec& dir, int& evals)
      : f_(f), x0_(x0), f0_(f0), dir_(dir), slope0_(dot(g0, dir)), evals_(evals) {}

  double initial_slope() const { return slope0_; }

  // Nocedal & Wright, algorithms 3.5 and 3.6. Returns false if no point with
  // sufficient decrease was found.
  bool run(double alpha_init, Point& out) {
    Point prev{0.0, f0_, slope0_, x0_, {}};
    double alpha = alpha_init;
    for (int i = 0; i < kMaxBracket; ++i) {
      Point cur = eval(alpha);
      if (cur.f > f0_ + kC1 * alpha * slope0_ || (i > 0 && cur.f >= prev.f)) return zoom(prev, cur, out);
      if (std::abs(cur.slope) <= -kC2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) return zoom(cur, prev, out);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return accept_best(out);
  }

 private:
  static constexpr double kC1 = 1e-4;
  static constexpr double kC2 = 0.9;
  static constexpr int kMaxBracket = 30;
  static constexpr int kMaxZoom = 40;

  Point eval(double alpha) {
    Point p;
    p.alpha = alpha;
    p.x = x0_;
    for (std::size_t i = 0; i < p.x.size(); ++i) p.x[i] += alpha * dir_[i];
    p.g.assign(p.x.size(), 0.0);
    p.f = f_(p.x, p.g);
    p.slope = dot(p.g, dir_);
    ++evals_;
    if (p.f < f0_ + kC1 * alpha * slope0_ && (!best_ || p.f < best_->f)) best_ = p;
    return p;
  }

  bool zoom(Point lo, Point hi, Point& out) {
    for (int i = 0; i < kMaxZoom; ++i) {
      // Cubic interpolation through (lo, hi), safeguarded toward bisection.
      const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (lo.alpha - hi.alpha);
      const double disc = d1 * d1 - lo.slope * hi.slope;
      double alpha = 0.5 * (lo.alpha + hi.alpha);
      if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), hi.alpha - lo.alpha);
        const double trial =
            hi.alpha - (hi.alpha - lo.alpha) * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
        const double a = std::min(lo.alpha, hi.alpha);
        const double b = std::max(lo.alpha, hi.alpha);
        const double margin = 0.1 * (b - a);
        if (std::isfinite(trial) && trial > a + margin && trial < b - margin) alpha = trial;
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
      Point cur = eval(alpha);
      if (cur.f > f0_ + kC1 * alpha * slope0_ || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -kC2 * slope0_) {
          out = std::move(cur);
          return true;
        }
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    return accept_best(out);
  }

  bool accept_best(Point& out) {
    if (!best_) return false;
    out = *best_;
    return true;
  }

  const ValueAndGradient& f_;
  const Vec& x0_;
  double f0_;
  const Vec& dir_;
  double slope0_;
  int& evals_;
  std::optional<Point> best_;
};

}  // namespace

OptimizeResult minimize_lbfgs(const ValueAndGradient& f, std::vector<double> x0, const LbfgsOptions& options,
                              const TraceSink& trace) {
  OptimizeResult res;
  Vec x = std::move(x0);
  Vec g(x.size(), 0.0);
  double fx = f(x, g);
  res.evaluations = 1;

  std::deque<Vec> s_hist;
  std::deque<Vec> y_hist;
  std::deque<double> rho_hist;

  int it = 0;
  double gnorm = norm2(g);
  if (trace) trace({0, fx, gnorm});
  while (gnorm >= options.grad_tol && it < options.max_iterations) {
    // Two-loop recursion for dir = -H g.
    Vec q = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], q);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * y_hist[k][i];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (auto& v : q) v *= gamma;
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], q);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += s_hist[k][i] * (alpha[k] - beta);
    }
    Vec dir(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) dir[i] = -q[i];
    if (dot(dir, g) >= 0.0) {
      // Lost descent; fall back to steepest descent and drop the history.
      for (std::size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    const double alpha0 = s_hist.empty() ? std::min(1.0, 1.0 / std::max(gnorm, 1e-300)) : 1.0;
    LineSearch ls(f, x, fx, g, dir, res.evaluations);
    Point next;
    if (!ls.run(alpha0, next)) break;

    Vec s(x.size());
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = next.x[i] - x[i];
      y[i] = next.g[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-16 * norm2(s) * norm2(y)) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double f_prev = fx;
    x = std::move(next.x);
    g = std::move(next.g);
    fx = next.f;
    gnorm = norm2(g);
    ++it;
    if (trace) trace({it, fx, gnorm});
    if (f_prev - fx <= 0.0 && gnorm >= options.grad_tol) break;  // stalled at rounding level
  }
  res.x = std::move(x);
  res.value = fx;
  res.grad_norm = gnorm;
  res.iterations = it;
  res.converged = gnorm < options.grad_tol;
  return res;
}

OptimizeResult minimize_spsa(const NoisyObjective& f, std::vector<double> x0, const SpsaOptions& options,
                             const TraceSink& trace) {
  OptimizeResult res;
  Vec x = std::move(x0);
  const std::size_t n = x.size();
  const int keep = std::max(1, options.average_last);
  Vec x_avg(n, 0.0);
  double f_avg = 0.0;
  int averaged = 0;
  std::uint64_t evaluation = 0;
  Vec delta(n);
  Vec probe(n);

  for (int k = 1; k <= options.max_iterations; ++k) {
    const double ak = options.a / std::pow(k + options.A, options.alpha);
    const double ck = options.c / std::pow(static_cast<double>(k), options.gamma);
    CounterRng rng(derive_key(options.seed, {static_cast<std::uint64_t>(k)}));
    for (auto& d : delta) d = (rng() >> 63) ? 1.0 : -1.0;

    for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + ck * delta[i];
    const double f_plus = f(probe, evaluation++);
    for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] - ck * delta[i];
    const double f_minus = f(probe, evaluation++);

    const double scale = (f_plus - f_minus) / (2.0 * ck);
    double step2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // delta_i = +-1, so 1/delta_i == delta_i.
      const double step = ak * scale * delta[i];
      x[i] -= step;
      step2 += step * step;
    }
    const double f_mid = 0.5 * (f_plus + f_minus);
    if (trace) trace({k, f_mid, std::sqrt(step2)});

    if (k > options.max_iterations - keep) {
      for (std::size_t i = 0; i < n; ++i) x_avg[i] += x[i];
      f_avg += f_mid;
      ++averaged;
    }
    res.iterations = k;
  }
  if (averaged > 0) {
    for (auto& v : x_avg) v /= averaged;
    res.x = std::move(x_avg);
    res.value = f_avg / averaged;
  } else {
    res.x = std::move(x);
  }
  res.evaluations = static_cast<int>(evaluation);
  res.converged = true;
  return res;
}

}  // namespace qdft
