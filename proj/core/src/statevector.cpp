#include "qdft/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/random/binomial_distribution.hpp>

#include "qdft/rng.hpp"

namespace qdft {

StateVector::StateVector(int num_qubits, std::uint64_t basis_index) : num_qubits_(num_qubits) {
  if (num_qubits < 0 || num_qubits > 30) throw std::invalid_argument("StateVector: unsupported qubit count");
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (basis_index >= dim) throw std::invalid_argument("StateVector: basis index out of range");
  amps_.assign(dim, cplx{});
  amps_[basis_index] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (num_qubits < 0 || num_qubits > 30 || amps_.size() != (std::uint64_t{1} << num_qubits)) {
    throw std::invalid_argument("StateVector: amplitude count does not match 2^M");
  }
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::apply_ry(int bit, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::uint64_t mask = std::uint64_t{1} << bit;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) continue;
    const cplx a0 = amps_[i];
    const cplx a1 = amps_[i | mask];
    amps_[i] = c * a0 - s * a1;
    amps_[i | mask] = s * a0 + c * a1;
  }
}

void StateVector::apply_cnot(int control_bit, int target_bit) {
  const std::uint64_t cmask = std::uint64_t{1} << control_bit;
  const std::uint64_t tmask = std::uint64_t{1} << target_bit;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
  }
}

void StateVector::apply_h(int bit) {
  const double r = std::numbers::sqrt2 / 2.0;
  const std::uint64_t mask = std::uint64_t{1} << bit;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) continue;
    const cplx a0 = amps_[i];
    const cplx a1 = amps_[i | mask];
    amps_[i] = r * (a0 + a1);
    amps_[i | mask] = r * (a0 - a1);
  }
}

void StateVector::apply_sdg(int bit) {
  const std::uint64_t mask = std::uint64_t{1} << bit;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) amps_[i] *= cplx{0.0, -1.0};
  }
}

void StateVector::rotate_to_basis(std::span<const Pauli> basis) {
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const int bit = static_cast<int>(b);
    if (basis[b] == Pauli::X) {
      apply_h(bit);
    } else if (basis[b] == Pauli::Y) {
      apply_sdg(bit);
      apply_h(bit);
    }
  }
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

void dump_amplitudes(std::ostream& out, const StateVector& state) {
  const auto old = out.precision(17);
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    out << i << ' ' << state.amplitude(i).real() << ' ' << state.amplitude(i).imag() << '\n';
  }
  out.precision(old);
}

AnsatzSpec AnsatzSpec::zeros(int num_qubits, int layers) {
  AnsatzSpec s{num_qubits, layers, {}};
  s.params.assign(s.expected_param_count(), 0.0);
  return s;
}

StateVector run_ry_ansatz(const AnsatzSpec& spec, std::uint64_t initial) {
  if (spec.num_qubits < 1 || spec.layers < 0) throw std::invalid_argument("run_ry_ansatz: invalid ansatz shape");
  if (spec.params.size() != spec.expected_param_count()) {
    throw std::invalid_argument("run_ry_ansatz: expected M(N_L+1) parameters");
  }
  const int m = spec.num_qubits;
  StateVector psi(m, initial);
  std::size_t k = 0;
  for (int layer = 0; layer < spec.layers; ++layer) {
    for (int b = 0; b < m; ++b) psi.apply_ry(b, spec.params[k++]);
    for (int b = 0; b + 1 < m; ++b) psi.apply_cnot(b, b + 1);
  }
  for (int b = 0; b < m; ++b) psi.apply_ry(b, spec.params[k++]);
  return psi;
}

double expectation_exact(const StateVector& state, const PauliSum& op) {
  if (state.num_qubits() != op.num_qubits()) {
    throw std::invalid_argument("expectation_exact: qubit count mismatch");
  }
  if (!op.is_hermitian()) throw std::invalid_argument("expectation_exact: operator is not Hermitian");
  const auto& a = state.amplitudes();
  cplx total{};
  for (const auto& [p, c] : op.terms()) {
    cplx term{};
    const std::uint64_t x = p.x_mask();
    for (std::uint64_t j = 0; j < a.size(); ++j) {
      term += std::conj(a[j ^ x]) * p.phase(j) * a[j];
    }
    total += c * term;
  }
  if (std::abs(total.imag()) > 1e-10) {
    throw std::invalid_argument("expectation_exact: expectation value has an imaginary part");
  }
  return total.real();
}

std::vector<double> gradient_parameter_shift(const AnsatzSpec& spec, std::uint64_t initial, const PauliSum& op) {
  std::vector<double> grad(spec.params.size());
  AnsatzSpec shifted = spec;
  constexpr double kShift = std::numbers::pi / 2.0;
  for (std::size_t j = 0; j < spec.params.size(); ++j) {
    shifted.params[j] = spec.params[j] + kShift;
    const double plus = expectation_exact(run_ry_ansatz(shifted, initial), op);
    shifted.params[j] = spec.params[j] - kShift;
    const double minus = expectation_exact(run_ry_ansatz(shifted, initial), op);
    shifted.params[j] = spec.params[j];
    grad[j] = 0.5 * (plus - minus);
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<std::uint64_t> sample_multinomial(std::span<const double> probabilities, std::uint64_t shots,
                                              std::uint64_t key) {
  CounterRng rng(key);
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  double remaining_mass = 0.0;
  for (double p : probabilities) remaining_mass += std::max(p, 0.0);
  std::uint64_t remaining = shots;
  for (std::size_t k = 0; k < probabilities.size() && remaining > 0; ++k) {
    const double p = std::max(probabilities[k], 0.0);
    if (k + 1 == probabilities.size() || remaining_mass <= 0.0) {
      counts[k] = remaining;
      remaining = 0;
      break;
    }
    const double q = std::clamp(p / remaining_mass, 0.0, 1.0);
    std::uint64_t draw = 0;
    if (q >= 1.0) {
      draw = remaining;
    } else if (q > 0.0) {
      boost::random::binomial_distribution<std::int64_t, double> binom(static_cast<std::int64_t>(remaining), q);
      draw = static_cast<std::uint64_t>(binom(rng));
    }
    counts[k] = draw;
    remaining -= draw;
    remaining_mass -= p;
  }
  return counts;
}

Counts sample_group(const StateVector& state, const MeasurementGroup& group, std::uint64_t shots, std::uint64_t key) {
  if (group.strings.empty()) throw std::invalid_argument("sample_group: empty measurement group");
  if (shots == 0) throw std::invalid_argument("sample_group: need at least one shot");
  if (static_cast<int>(group.basis.size()) != state.num_qubits()) {
    throw std::invalid_argument("sample_group: basis size does not match the qubit count");
  }
  StateVector rotated = state;
  rotated.rotate_to_basis(group.basis);
  const auto probs = rotated.probabilities();
  const auto raw = sample_multinomial(probs, shots, key);
  Counts counts;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] > 0) counts.emplace(i, raw[i]);
  }
  return counts;
}

double string_expectation_from_counts(const PauliString& p, const Counts& counts) {
  const std::uint64_t support = p.support();
  std::int64_t signed_sum = 0;
  std::uint64_t total = 0;
  for (const auto& [outcome, n] : counts) {
    const bool odd = std::popcount(outcome & support) & 1;
    signed_sum += odd ? -static_cast<std::int64_t>(n) : static_cast<std::int64_t>(n);
    total += n;
  }
  return total == 0 ? 0.0 : static_cast<double>(signed_sum) / static_cast<double>(total);
}

MeasurementPlan make_measurement_plan(const PauliSum& op, const ShotBudget& budget) {
  MeasurementPlan plan;
  if (budget.allocation == ShotAllocation::per_group) {
    plan.groups = group_commuting(op);
  } else {
    // Identity terms ride along with the first measured string.
    std::vector<PauliString> identities;
    for (const auto& [p, c] : op.terms()) {
      if (p.is_identity()) {
        identities.push_back(p);
        continue;
      }
      MeasurementGroup g;
      g.strings.push_back(p);
      for (int b = 0; b < op.num_qubits(); ++b) g.basis.push_back(p.at(b) == Pauli::I ? Pauli::Z : p.at(b));
      plan.groups.push_back(std::move(g));
    }
    if (plan.groups.empty() && !identities.empty()) {
      plan.groups.push_back({identities, std::vector<Pauli>(static_cast<std::size_t>(op.num_qubits()), Pauli::Z)});
    } else if (!identities.empty()) {
      plan.groups.front().strings.insert(plan.groups.front().strings.begin(), identities.begin(), identities.end());
    }
  }
  const auto n_groups = static_cast<std::uint64_t>(plan.groups.size());
  if (n_groups == 0) throw std::invalid_argument("make_measurement_plan: operator has no terms");
  if (budget.total_shots < n_groups) {
    throw std::invalid_argument("make_measurement_plan: fewer shots than measurement groups");
  }
  plan.shots.assign(n_groups, budget.total_shots / n_groups);
  for (std::uint64_t g = 0; g < budget.total_shots % n_groups; ++g) ++plan.shots[g];
  return plan;
}

std::map<PauliString, double> sample_plan(const StateVector& state, const MeasurementPlan& plan, std::uint64_t key) {
  std::map<PauliString, double> out;
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    const auto& group = plan.groups[g];
    bool all_identity = true;
    for (const auto& p : group.strings) all_identity = all_identity && p.is_identity();
    if (all_identity) {
      for (const auto& p : group.strings) out[p] = 1.0;
      continue;
    }
    const Counts counts = sample_group(state, group, plan.shots[g], derive_key(key, {g}));
    for (const auto& p : group.strings) {
      out[p] = p.is_identity() ? 1.0 : string_expectation_from_counts(p, counts);
    }
  }
  return out;
}

double estimate_expectation_sampled(const StateVector& state, const PauliSum& op, const MeasurementPlan& plan,
                                    std::uint64_t key) {
  if (!op.is_hermitian()) throw std::invalid_argument("estimate_expectation_sampled: operator is not Hermitian");
  const auto values = sample_plan(state, plan, key);
  double total = 0.0;
  for (const auto& [p, c] : op.terms()) {
    auto it = values.find(p);
    if (it == values.end()) throw std::invalid_argument("estimate_expectation_sampled: string missing from plan");
    total += c.real() * it->second;
  }
  return total;
}

double estimate_expectation_sampled(const StateVector& state, const PauliSum& op, const ShotBudget& budget) {
  return estimate_expectation_sampled(state, op, make_measurement_plan(op, budget), budget.seed);
}

}  // namespace qdft
