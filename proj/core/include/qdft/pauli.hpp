#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qdft {

using cplx = std::complex<double>;

/// Default magnitude below which Pauli coefficients are dropped.
inline constexpr double kPauliPruneTol = 1e-12;

/// Dense matrices larger than 2^12 are refused.
inline constexpr int kMaxDenseQubits = 12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

/// An M-qubit tensor product of single-qubit Pauli matrices.
///
/// Bit convention shared by the whole library: computational basis state
/// |eta_M ... eta_1> is the integer I with eta_1 as the least-significant
/// bit. The text form lists letters in the same order as the ket, so the
/// leftmost letter acts on qubit M (bit M-1) and the rightmost letter on
/// qubit 1 (bit 0). "XZI" therefore applies X to bit 2 and Z to bit 1.
///
/// Internally the string is stored in symplectic form: bit b of `x_mask`
/// (`z_mask`) is set when the letter acting on bit b has an X (Z) component,
/// with Y = i X Z.
class PauliString {
 public:
  PauliString() = default;
  /// The identity on `num_qubits` qubits.
  explicit PauliString(int num_qubits);
  PauliString(int num_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  /// Parses a letter string such as "XZI". Throws std::invalid_argument.
  static PauliString parse(std::string_view letters);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  /// Bits on which the string acts non-trivially.
  std::uint64_t support() const { return x_ | z_; }
  bool is_identity() const { return support() == 0; }
  int y_count() const;

  /// Letter acting on bit `bit` (0 = qubit 1).
  Pauli at(int bit) const;
  void set(int bit, Pauli p);

  std::string str() const;

  /// Action on a basis state: P|j> = phase(j) |j ^ x_mask>.
  cplx phase(std::uint64_t basis_index) const;

  /// True when, on every qubit, the two letters are equal or one is I.
  bool qubitwise_commutes(const PauliString& other) const;

  /// Lexicographic order over the text form with I < X < Y < Z.
  std::strong_ordering operator<=>(const PauliString& other) const;
  bool operator==(const PauliString& other) const = default;

 private:
  int num_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

std::ostream& operator<<(std::ostream& os, const PauliString& p);

/// A weighted sum of M-qubit Pauli strings kept in canonical (sorted) order.
class PauliSum {
 public:
  using TermMap = std::map<PauliString, cplx>;

  PauliSum() = default;
  explicit PauliSum(int num_qubits) : num_qubits_(num_qubits) {}

  static PauliSum identity(int num_qubits, double coeff = 1.0);

  int num_qubits() const { return num_qubits_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Adds `coeff` to the coefficient of `p`.
  void add(const PauliString& p, cplx coeff);
  cplx coefficient(const PauliString& p) const;

  /// Removes terms with |coeff| <= tol.
  void prune(double tol = kPauliPruneTol);

  /// All coefficients real within `tol`.
  bool is_hermitian(double tol = 1e-10) const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator*=(cplx scale);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }

  /// Operator product (Pauli multiplication table applied term by term).
  PauliSum operator*(const PauliSum& other) const;

  /// Exact dense matrix, 2^M x 2^M. Throws for M > kMaxDenseQubits.
  Eigen::MatrixXcd to_dense() const;

  /// Text serialization, one `<re> <im> <string>` line per term.
  std::string to_text() const;
  static PauliSum from_text(std::string_view text);

 private:
  int num_qubits_ = 0;
  TermMap terms_;
};

/// Single-qubit Pauli decomposition of a Hermitian 2^M x 2^M matrix with
/// coefficients trace(P H) / 2^M. Terms with |coeff| <= tol are dropped.
/// Throws std::invalid_argument for non-Hermitian or non-power-of-two input.
PauliSum decompose_hermitian(const Eigen::MatrixXcd& h, double tol = kPauliPruneTol);

/// Pauli expansion of |I><J| + |J><I| for I != J, or of |I><I| for I == J,
/// assembled qubit by qubit from the four ladder-operator products
/// b b^+ = (I+Z)/2, b = (X+iY)/2, b^+ = (X-iY)/2, b^+ b = (I-Z)/2.
PauliSum projector_pair_to_pauli(std::uint64_t i, std::uint64_t j, int num_qubits);

/// Qubit-wise commuting set of strings measured with a single basis setting.
struct MeasurementGroup {
  std::vector<PauliString> strings;
  /// Measurement basis per bit; only X, Y or Z. Bits untouched by every
  /// member are measured in Z.
  std::vector<Pauli> basis;
};

/// Greedy first-fit partition of the terms of `sum` (canonical order) into
/// qubit-wise commuting groups. Deterministic.
std::vector<MeasurementGroup> group_commuting(const PauliSum& sum);

/// Integer ceil(log2(n)), with 0 for n <= 1.
int ceil_log2(std::uint64_t n);

}  // namespace qdft
