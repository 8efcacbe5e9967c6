#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace qdft {

/// One optimizer iteration, as written to trace CSV files.
struct TraceRow {
  int iteration = 0;
  double ensemble_energy = 0.0;
  /// Gradient norm for quasi-Newton, parameter step norm for SPSA.
  double step_metric = 0.0;
};

using TraceSink = std::function<void(const TraceRow&)>;

/// Writes `iteration,ensemble_energy,<metric_name>` and then rows as they arrive.
TraceSink csv_trace_sink(std::ostream& out, const char* metric_name);

struct LbfgsOptions {
  double grad_tol = 1e-7;
  int max_iterations = 2000;
  int history = 10;
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Objective returning f(x) and writing the gradient into `grad`.
using ValueAndGradient = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Limited-memory BFGS with a strong-Wolfe line search. Accepted steps never
/// increase f. Stops when ||grad||_2 < grad_tol, when the line search can no
/// longer make progress, or after max_iterations.
OptimizeResult minimize_lbfgs(const ValueAndGradient& f, std::vector<double> x0, const LbfgsOptions& options,
                              const TraceSink& trace = {});

struct SpsaOptions {
  double a = 0.2;
  double c = 0.1;
  double A = 50.0;
  double alpha = 0.602;
  double gamma = 0.101;
  int max_iterations = 5000;
  int average_last = 20;
  std::uint64_t seed = 0;
};

/// Stochastic objective: `evaluation` numbers every call so the objective can
/// draw from its own random stream.
using NoisyObjective = std::function<double(std::span<const double> x, std::uint64_t evaluation)>;

/// Simultaneous perturbation stochastic approximation with gains
/// a_k = a / (k + A)^alpha and c_k = c / k^gamma, k = 1, 2, ... Returns the
/// average of the final `average_last` iterates; `value` is the mean of the
/// objective samples over those iterations.
OptimizeResult minimize_spsa(const NoisyObjective& f, std::vector<double> x0, const SpsaOptions& options,
                             const TraceSink& trace = {});

}  // namespace qdft
