#include "qdft/pauli.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qdft {

namespace {

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Pauli letter(bool x, bool z) {
  if (x) return z ? Pauli::Y : Pauli::X;
  return z ? Pauli::Z : Pauli::I;
}

void check_qubits(int num_qubits) {
  if (num_qubits < 0 || num_qubits > 63) {
    throw std::invalid_argument("PauliString: qubit count must lie in [0, 63]");
  }
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

int ceil_log2(std::uint64_t n) {
  if (n <= 1) return 0;
  return static_cast<int>(std::bit_width(n - 1));
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(int num_qubits) : num_qubits_(num_qubits) { check_qubits(num_qubits); }

PauliString::PauliString(int num_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : num_qubits_(num_qubits), x_(x_mask), z_(z_mask) {
  check_qubits(num_qubits);
  const std::uint64_t allowed = num_qubits == 0 ? 0 : (~std::uint64_t{0} >> (64 - num_qubits));
  if (((x_mask | z_mask) & ~allowed) != 0) {
    throw std::invalid_argument("PauliString: mask has bits beyond the qubit count");
  }
}

PauliString PauliString::parse(std::string_view letters) {
  PauliString p(static_cast<int>(letters.size()));
  const int m = p.num_qubits_;
  for (int k = 0; k < m; ++k) {
    const int bit = m - 1 - k;
    switch (letters[static_cast<std::size_t>(k)]) {
      case 'I': break;
      case 'X': p.set(bit, Pauli::X); break;
      case 'Y': p.set(bit, Pauli::Y); break;
      case 'Z': p.set(bit, Pauli::Z); break;
      default:
        throw std::invalid_argument("PauliString: invalid letter in '" + std::string(letters) + "'");
    }
  }
  return p;
}

int PauliString::y_count() const { return std::popcount(x_ & z_); }

Pauli PauliString::at(int bit) const { return letter((x_ >> bit) & 1U, (z_ >> bit) & 1U); }

void PauliString::set(int bit, Pauli p) {
  if (bit < 0 || bit >= num_qubits_) throw std::out_of_range("PauliString::set: bit out of range");
  const std::uint64_t mask = std::uint64_t{1} << bit;
  x_ &= ~mask;
  z_ &= ~mask;
  if (p == Pauli::X || p == Pauli::Y) x_ |= mask;
  if (p == Pauli::Z || p == Pauli::Y) z_ |= mask;
}

std::string PauliString::str() const {
  std::string s(static_cast<std::size_t>(num_qubits_), 'I');
  for (int bit = 0; bit < num_qubits_; ++bit) {
    s[static_cast<std::size_t>(num_qubits_ - 1 - bit)] = to_char(at(bit));
  }
  return s;
}

cplx PauliString::phase(std::uint64_t basis_index) const {
  const int sign_flips = std::popcount(basis_index & z_);
  return i_power(y_count() + 2 * sign_flips);
}

bool PauliString::qubitwise_commutes(const PauliString& other) const {
  const std::uint64_t both = support() & other.support();
  return ((x_ ^ other.x_) & both) == 0 && ((z_ ^ other.z_) & both) == 0;
}

std::strong_ordering PauliString::operator<=>(const PauliString& other) const {
  if (auto c = num_qubits_ <=> other.num_qubits_; c != 0) return c;
  for (int bit = num_qubits_ - 1; bit >= 0; --bit) {
    const auto a = static_cast<int>(at(bit));
    const auto b = static_cast<int>(other.at(bit));
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.str(); }

// ---------------------------------------------------------------------------
// PauliSum

PauliSum PauliSum::identity(int num_qubits, double coeff) {
  PauliSum s(num_qubits);
  s.add(PauliString(num_qubits), coeff);
  return s;
}

void PauliSum::add(const PauliString& p, cplx coeff) {
  if (p.num_qubits() != num_qubits_) {
    throw std::invalid_argument("PauliSum::add: qubit count mismatch");
  }
  terms_[p] += coeff;
}

cplx PauliSum::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? cplx{} : it->second;
}

void PauliSum::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [p, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (empty() && num_qubits_ == 0) num_qubits_ = other.num_qubits_;
  for (const auto& [p, c] : other.terms_) add(p, c);
  return *this;
}

PauliSum& PauliSum::operator*=(cplx scale) {
  for (auto& kv : terms_) kv.second *= scale;
  return *this;
}

PauliSum PauliSum::operator*(const PauliSum& other) const {
  if (num_qubits_ != other.num_qubits_) throw std::invalid_argument("PauliSum product: qubit count mismatch");
  PauliSum out(num_qubits_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) {
      const std::uint64_t x = a.x_mask() ^ b.x_mask();
      const std::uint64_t z = a.z_mask() ^ b.z_mask();
      PauliString c(num_qubits_, x, z);
      // a = i^{ya} X^xa Z^za, so a*b picks up (-1)^{|za & xb|} from moving Z past X.
      const int k = a.y_count() + b.y_count() - c.y_count() + 2 * std::popcount(a.z_mask() & b.x_mask());
      out.add(c, ca * cb * i_power(k));
    }
  }
  out.prune(0.0);
  return out;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  if (num_qubits_ > kMaxDenseQubits) {
    throw std::length_error("PauliSum::to_dense: too many qubits for a dense matrix");
  }
  const std::uint64_t dim = std::uint64_t{1} << num_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [p, c] : terms_) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      m(static_cast<Eigen::Index>(col ^ p.x_mask()), static_cast<Eigen::Index>(col)) += c * p.phase(col);
    }
  }
  return m;
}

std::string PauliSum::to_text() const {
  std::string out;
  char buf[96];
  for (const auto& [p, c] : terms_) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g ", c.real(), c.imag());
    out += buf;
    out += p.str();
    out += '\n';
  }
  return out;
}

PauliSum PauliSum::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  PauliSum sum;
  bool sized = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    double re = 0.0;
    double im = 0.0;
    std::string letters;
    if (!(ls >> re >> im >> letters)) {
      throw std::invalid_argument("PauliSum::from_text: malformed line '" + line + "'");
    }
    auto p = PauliString::parse(letters);
    if (!sized) {
      sum = PauliSum(p.num_qubits());
      sized = true;
    }
    sum.add(p, {re, im});
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Decompositions

PauliSum decompose_hermitian(const Eigen::MatrixXcd& h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("decompose_hermitian: matrix must be square and non-empty");
  }
  const auto dim = static_cast<std::uint64_t>(h.rows());
  if (!std::has_single_bit(dim)) {
    throw std::invalid_argument("decompose_hermitian: dimension is not a power of two");
  }
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("decompose_hermitian: matrix is not Hermitian");
  }
  const int m = std::countr_zero(dim);
  if (m > kMaxDenseQubits) throw std::length_error("decompose_hermitian: too many qubits");

  PauliSum out(m);
  const double norm = 1.0 / static_cast<double>(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t z = 0; z < dim; ++z) {
      PauliString p(m, x, z);
      cplx tr{};
      for (std::uint64_t k = 0; k < dim; ++k) {
        tr += p.phase(k) * h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ x));
      }
      // Hermitian input gives real coefficients up to rounding.
      const double coeff = tr.real() * norm;
      if (std::abs(coeff) > tol) out.add(p, coeff);
    }
  }
  return out;
}

PauliSum projector_pair_to_pauli(std::uint64_t i, std::uint64_t j, int num_qubits) {
  check_qubits(num_qubits);
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (i >= dim || j >= dim) throw std::out_of_range("projector_pair_to_pauli: index out of range");

  // |I><J| as a product over bits of single-qubit factors.
  std::map<PauliString, cplx> acc{{PauliString(num_qubits), 1.0}};
  for (int bit = 0; bit < num_qubits; ++bit) {
    const bool ei = (i >> bit) & 1U;
    const bool ej = (j >> bit) & 1U;
    std::pair<Pauli, cplx> f[2];
    if (!ei && !ej) {        // b b^+
      f[0] = {Pauli::I, 0.5};
      f[1] = {Pauli::Z, 0.5};
    } else if (!ei && ej) {  // b
      f[0] = {Pauli::X, 0.5};
      f[1] = {Pauli::Y, cplx{0.0, 0.5}};
    } else if (ei && !ej) {  // b^+
      f[0] = {Pauli::X, 0.5};
      f[1] = {Pauli::Y, cplx{0.0, -0.5}};
    } else {                 // b^+ b
      f[0] = {Pauli::I, 0.5};
      f[1] = {Pauli::Z, -0.5};
    }
    std::map<PauliString, cplx> next;
    for (const auto& [p, c] : acc) {
      for (const auto& [letter_f, cf] : f) {
        PauliString q = p;
        q.set(bit, letter_f);
        next[q] += c * cf;
      }
    }
    acc = std::move(next);
  }

  // c + conj(c) for the Hermitian pair; |I><I| only has real I/Z factors.
  PauliSum out(num_qubits);
  for (const auto& [p, c] : acc) {
    const double coeff = i != j ? 2.0 * c.real() : c.real();
    if (std::abs(coeff) > kPauliPruneTol) out.add(p, coeff);
  }
  return out;
}

std::vector<MeasurementGroup> group_commuting(const PauliSum& sum) {
  const int m = sum.num_qubits();
  std::vector<MeasurementGroup> groups;
  for (const auto& [p, c] : sum.terms()) {
    bool placed = false;
    for (auto& g : groups) {
      bool fits = true;
      for (int bit = 0; bit < m && fits; ++bit) {
        const Pauli l = p.at(bit);
        fits = l == Pauli::I || g.basis[static_cast<std::size_t>(bit)] == Pauli::I ||
               g.basis[static_cast<std::size_t>(bit)] == l;
      }
      if (fits) {
        g.strings.push_back(p);
        for (int bit = 0; bit < m; ++bit) {
          if (p.at(bit) != Pauli::I) g.basis[static_cast<std::size_t>(bit)] = p.at(bit);
        }
        placed = true;
        break;
      }
    }
    if (!placed) {
      MeasurementGroup g;
      g.strings.push_back(p);
      g.basis.resize(static_cast<std::size_t>(m), Pauli::I);
      for (int bit = 0; bit < m; ++bit) g.basis[static_cast<std::size_t>(bit)] = p.at(bit);
      groups.push_back(std::move(g));
    }
  }
  for (auto& g : groups) {
    for (auto& l : g.basis) {
      if (l == Pauli::I) l = Pauli::Z;
    }
  }
  return groups;
}

}  // namespace qdft
