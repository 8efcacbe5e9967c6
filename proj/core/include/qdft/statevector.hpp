#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "qdft/pauli.hpp"

namespace qdft {

/// Pure state of M qubits, amplitudes indexed by the basis integer I.
class StateVector {
 public:
  StateVector() = default;
  /// |basis_index> on `num_qubits` qubits.
  StateVector(int num_qubits, std::uint64_t basis_index);
  StateVector(int num_qubits, std::vector<cplx> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx amplitude(std::uint64_t i) const { return amps_[i]; }
  double norm() const;

  // Single- and two-qubit gates; `bit` 0 is qubit 1.
  void apply_ry(int bit, double theta);
  void apply_cnot(int control_bit, int target_bit);
  void apply_h(int bit);
  void apply_sdg(int bit);

  /// Rotates so that a Z-basis measurement samples the eigenbasis of the
  /// per-bit `basis` letters (X: H, Y: S^dagger then H).
  void rotate_to_basis(std::span<const Pauli> basis);

  std::vector<double> probabilities() const;

 private:
  int num_qubits_ = 0;
  std::vector<cplx> amps_;
};

/// Writes one `<index> <re> <im>` line per amplitude.
void dump_amplitudes(std::ostream& out, const StateVector& state);

/// Hardware-efficient R_y ansatz. `params` are laid out in application order:
/// the N_L entangling-block layers first (M angles each, entry n*M + b acts
/// on bit b), then the final rotation layer.
struct AnsatzSpec {
  int num_qubits = 0;
  int layers = 0;
  std::vector<double> params;

  static AnsatzSpec zeros(int num_qubits, int layers);
  std::size_t expected_param_count() const {
    return static_cast<std::size_t>(num_qubits) * static_cast<std::size_t>(layers + 1);
  }
};

/// Prepares |initial>, applies each entangling block (R_y on every qubit,
/// then CNOT(m -> m+1) for m = 1..M-1 in ascending order), and finally the
/// closing R_y layer. Throws std::invalid_argument on a parameter-count
/// mismatch or an out-of-range initial state.
StateVector run_ry_ansatz(const AnsatzSpec& spec, std::uint64_t initial);

/// <state|op|state>. Throws std::invalid_argument for a non-Hermitian op, a
/// qubit-count mismatch, or an imaginary part above 1e-10.
double expectation_exact(const StateVector& state, const PauliSum& op);

/// d<E>/d theta_j by the two-term parameter-shift rule, exact amplitudes.
std::vector<double> gradient_parameter_shift(const AnsatzSpec& spec, std::uint64_t initial, const PauliSum& op);

// ---------------------------------------------------------------------------
// Shot sampling

enum class ShotAllocation {
  per_group,  ///< total shots split over qubit-wise commuting groups
  per_term,   ///< total shots split over individual non-identity strings
};

struct ShotBudget {
  std::uint64_t total_shots = 0;
  ShotAllocation allocation = ShotAllocation::per_group;
  std::uint64_t seed = 0;
};

using Counts = std::map<std::uint64_t, std::uint64_t>;

/// Draws `shots` outcomes from the multinomial over the Born probabilities of
/// `state` rotated into the group's basis. Deterministic in `key`. Throws
/// std::invalid_argument for an empty group or zero shots.
Counts sample_group(const StateVector& state, const MeasurementGroup& group, std::uint64_t shots, std::uint64_t key);

/// Multinomial counts for explicit probabilities (sequential conditional
/// binomials). Exposed for tests and sampled occupations.
std::vector<std::uint64_t> sample_multinomial(std::span<const double> probabilities, std::uint64_t shots,
                                              std::uint64_t key);

/// Mean eigenvalue of `p` over the counts (counts were taken in a basis
/// compatible with `p`).
double string_expectation_from_counts(const PauliString& p, const Counts& counts);

/// Measurement groups plus the shot count each receives.
struct MeasurementPlan {
  std::vector<MeasurementGroup> groups;
  std::vector<std::uint64_t> shots;
};

/// Groups `op` according to the allocation mode and splits the shots: floor
/// division with the remainder going to the first groups. Throws
/// std::invalid_argument when there are no groups or fewer shots than groups.
MeasurementPlan make_measurement_plan(const PauliSum& op, const ShotBudget& budget);

/// Sampled expectation value of every string in the plan. Group g draws from
/// stream derive_key(key, {g}).
std::map<PauliString, double> sample_plan(const StateVector& state, const MeasurementPlan& plan, std::uint64_t key);

/// Sum over terms of coefficient times the sampled string expectation.
double estimate_expectation_sampled(const StateVector& state, const PauliSum& op, const MeasurementPlan& plan,
                                    std::uint64_t key);
double estimate_expectation_sampled(const StateVector& state, const PauliSum& op, const ShotBudget& budget);

}  // namespace qdft
