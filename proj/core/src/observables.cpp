#include "qdft/observables.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "qdft/rng.hpp"

namespace qdft {

namespace {

std::uint64_t basis_of(Eigen::Index orbital, std::span<const std::uint64_t> orbital_to_basis) {
  return orbital_to_basis.empty() ? static_cast<std::uint64_t>(orbital)
                                  : orbital_to_basis[static_cast<std::size_t>(orbital)];
}

void check_states(std::span<const StateVector> states, Eigen::Index n_logical,
                  std::span<const std::uint64_t> orbital_to_basis) {
  if (states.empty()) return;
  const auto dim = states.front().dim();
  if (static_cast<std::uint64_t>(n_logical) > dim) {
    throw std::invalid_argument("observables: more orbitals than basis states");
  }
  if (!orbital_to_basis.empty() && orbital_to_basis.size() < static_cast<std::size_t>(n_logical)) {
    throw std::invalid_argument("observables: orbital_to_basis shorter than the orbital count");
  }
  for (const auto& s : states) {
    if (s.dim() != dim) throw std::invalid_argument("observables: states differ in qubit count");
  }
}

double real_amp(const StateVector& s, std::uint64_t i) {
  const cplx a = s.amplitude(i);
  if (std::abs(a.imag()) > 1e-10) throw std::invalid_argument("observables: complex amplitude in a real ansatz");
  return a.real();
}

}  // namespace

Eigen::VectorXd occupations(std::span<const StateVector> states, Eigen::Index n_logical, const EvaluationMode& mode,
                            std::span<const std::uint64_t> orbital_to_basis) {
  check_states(states, n_logical, orbital_to_basis);
  Eigen::VectorXd n = Eigen::VectorXd::Zero(n_logical);
  for (std::size_t k = 0; k < states.size(); ++k) {
    std::vector<double> p = states[k].probabilities();
    if (mode.is_sampled()) {
      const auto counts = sample_multinomial(p, mode.shots->total_shots, derive_key(mode.shots->seed, {k}));
      for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(mode.shots->total_shots);
      }
    }
    for (Eigen::Index i = 0; i < n_logical; ++i) n(i) += p[basis_of(i, orbital_to_basis)];
  }
  return n;
}

double gamma_element(const StateVector& state, std::uint64_t i, std::uint64_t j, const EvaluationMode& mode) {
  if (i >= state.dim() || j >= state.dim()) throw std::out_of_range("gamma_element: index out of range");
  if (!mode.is_sampled()) {
    if (i == j) return std::norm(state.amplitude(i));
    return 2.0 * real_amp(state, i) * real_amp(state, j);
  }
  return estimate_expectation_sampled(state, projector_pair_to_pauli(i, j, state.num_qubits()), *mode.shots);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> measured_pairs(Eigen::Index n_logical,
                                                                  const DensityRequest& request) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  if (request.diagonal_only) return pairs;
  const bool use_pattern = !request.dense && request.pattern.size() > 0;
  if (use_pattern && (request.pattern.rows() != n_logical || request.pattern.cols() != n_logical)) {
    throw std::invalid_argument("measured_pairs: sparsity pattern has the wrong shape");
  }
  for (Eigen::Index i = 0; i < n_logical; ++i) {
    for (Eigen::Index j = i + 1; j < n_logical; ++j) {
      if (!use_pattern || std::abs(request.pattern(i, j)) > request.pattern_tol) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

PauliSum gamma_measurement_strings(std::span<const std::pair<Eigen::Index, Eigen::Index>> pairs, Eigen::Index n_logical,
                                   int num_qubits, std::span<const std::uint64_t> orbital_to_basis) {
  PauliSum out(num_qubits);
  const auto add_all = [&](const PauliSum& op) {
    for (const auto& [p, c] : op.terms()) {
      if (out.coefficient(p) == cplx{}) out.add(p, 1.0);
    }
  };
  for (Eigen::Index i = 0; i < n_logical; ++i) {
    const auto b = basis_of(i, orbital_to_basis);
    add_all(projector_pair_to_pauli(b, b, num_qubits));
  }
  for (const auto& [i, j] : pairs) {
    add_all(projector_pair_to_pauli(basis_of(i, orbital_to_basis), basis_of(j, orbital_to_basis), num_qubits));
  }
  return out;
}

Eigen::MatrixXd density_from_estimates(const std::map<PauliString, double>& estimates,
                                       std::span<const std::pair<Eigen::Index, Eigen::Index>> pairs,
                                       Eigen::Index n_logical, int num_qubits,
                                       std::span<const std::uint64_t> orbital_to_basis) {
  const auto expect = [&](const PauliSum& op) {
    double v = 0.0;
    for (const auto& [p, c] : op.terms()) {
      auto it = estimates.find(p);
      if (it == estimates.end()) throw std::invalid_argument("density_from_estimates: missing Pauli estimate");
      v += c.real() * it->second;
    }
    return v;
  };
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_logical, n_logical);
  for (Eigen::Index i = 0; i < n_logical; ++i) {
    const auto b = basis_of(i, orbital_to_basis);
    d(i, i) = expect(projector_pair_to_pauli(b, b, num_qubits));
  }
  for (const auto& [i, j] : pairs) {
    const double g = expect(
        projector_pair_to_pauli(basis_of(i, orbital_to_basis), basis_of(j, orbital_to_basis), num_qubits));
    d(i, j) = d(j, i) = 0.5 * g;
  }
  return d;
}

Eigen::MatrixXd build_ks_density_matrix(std::span<const StateVector> states, Eigen::Index n_logical,
                                        const EvaluationMode& mode, const DensityRequest& request,
                                        std::span<const std::uint64_t> orbital_to_basis) {
  check_states(states, n_logical, orbital_to_basis);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_logical, n_logical);
  if (!mode.is_sampled()) {
    for (const auto& s : states) {
      Eigen::VectorXd phi(n_logical);
      for (Eigen::Index i = 0; i < n_logical; ++i) phi(i) = real_amp(s, basis_of(i, orbital_to_basis));
      d.noalias() += phi * phi.transpose();
    }
    return d;
  }
  if (request.diagonal_only) {
    d.diagonal() = occupations(states, n_logical, mode, orbital_to_basis);
    return d;
  }
  if (states.empty()) return d;
  const int m = states.front().num_qubits();
  const auto pairs = measured_pairs(n_logical, request);
  const PauliSum strings = gamma_measurement_strings(pairs, n_logical, m, orbital_to_basis);
  const MeasurementPlan plan = make_measurement_plan(strings, *mode.shots);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto est = sample_plan(states[k], plan, derive_key(mode.shots->seed, {k}));
    d += density_from_estimates(est, pairs, n_logical, m, orbital_to_basis);
  }
  return d;
}

Eigen::VectorXd realspace_density(const Eigen::MatrixXd& d, const Eigen::MatrixXd& basis_values, double spin_factor) {
  if (d.rows() != d.cols() || basis_values.cols() != d.rows()) {
    throw std::invalid_argument("realspace_density: basis values and density matrix dimensions differ");
  }
  if (basis_values.rows() == 0) return Eigen::VectorXd(0);
  const Eigen::MatrixXd bd = basis_values * d;
  return spin_factor * bd.cwiseProduct(basis_values).rowwise().sum();
}

void write_density_csv(std::ostream& out, const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                       const Eigen::VectorXd& density) {
  if (points.rows() != weights.size() || weights.size() != density.size() || (points.rows() > 0 && points.cols() != 3)) {
    throw std::invalid_argument("write_density_csv: grid arrays have inconsistent sizes");
  }
  out << "grid_index,x,y,z,weight,density\n";
  char buf[160];
  for (Eigen::Index g = 0; g < density.size(); ++g) {
    std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g,%.12g,%.12g,%.12g\n", static_cast<long>(g), points(g, 0),
                  points(g, 1), points(g, 2), weights(g), density(g));
    out << buf;
  }
}

}  // namespace qdft
