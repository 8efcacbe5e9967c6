#include "qdft/aux_mapping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace qdft {

KsMatrix::KsMatrix(Eigen::MatrixXd matrix, SpinBlock block) : h(std::move(matrix)), spin_block(block) {
  basis_labels.reserve(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index i = 0; i < h.rows(); ++i) basis_labels.push_back("chi" + std::to_string(i));
}

void KsMatrix::validate(double tol) const {
  if (h.rows() != h.cols()) throw std::invalid_argument("KsMatrix: matrix is not square");
  if (!h.allFinite()) throw std::invalid_argument("KsMatrix: non-finite entry");
  if (h.size() > 0 && (h - h.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("KsMatrix: matrix is not symmetric");
  }
}

KsMatrix read_ks_matrix(std::istream& in) {
  long n = 0;
  if (!(in >> n) || n <= 0) throw std::invalid_argument("read_ks_matrix: missing or invalid dimension");
  Eigen::MatrixXd h(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (!(in >> h(i, j))) throw std::invalid_argument("read_ks_matrix: truncated matrix data");
    }
  }
  KsMatrix out(std::move(h));
  out.validate();
  return out;
}

KsMatrix read_ks_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_ks_matrix_file: cannot open " + path);
  return read_ks_matrix(in);
}

void write_ks_matrix(std::ostream& out, const KsMatrix& h) {
  out << h.dim() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < h.dim(); ++i) {
    for (Eigen::Index j = 0; j < h.dim(); ++j) {
      out << (j ? " " : "") << h.h(i, j);
    }
    out << '\n';
  }
}

KsMatrix select_spin_block(const KsMatrix& h_full, double tol) {
  h_full.validate(1e-10);
  const Eigen::Index two_n = h_full.dim();
  if (two_n % 2 != 0 || two_n == 0) {
    throw std::invalid_argument("select_spin_block: spin-orbital dimension must be even");
  }
  const Eigen::Index n = two_n / 2;
  const auto& h = h_full.h;
  if (h.topRightCorner(n, n).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("select_spin_block: alpha-beta coupling present (open-shell input not supported)");
  }
  if ((h.topLeftCorner(n, n) - h.bottomRightCorner(n, n)).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("select_spin_block: alpha and beta blocks differ (open-shell input not supported)");
  }
  KsMatrix out(h.topLeftCorner(n, n), SpinBlock::alpha);
  if (static_cast<Eigen::Index>(h_full.basis_labels.size()) == two_n) {
    out.basis_labels.assign(h_full.basis_labels.begin(), h_full.basis_labels.begin() + n);
  }
  return out;
}

namespace {

// Gershgorin bounds [lo, hi] on the spectrum.
std::pair<double, double> gershgorin(const Eigen::MatrixXd& h) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double radius = h.row(i).cwiseAbs().sum() - std::abs(h(i, i));
    lo = std::min(lo, h(i, i) - radius);
    hi = std::max(hi, h(i, i) + radius);
  }
  return {lo, hi};
}

std::vector<std::uint64_t> complete_index_map(const std::optional<std::vector<std::uint64_t>>& requested,
                                              std::uint64_t n, std::uint64_t dim) {
  std::vector<std::uint64_t> map;
  if (!requested) {
    map.resize(dim);
    for (std::uint64_t i = 0; i < dim; ++i) map[i] = i;
    return map;
  }
  map = *requested;
  if (map.size() != n && map.size() != dim) {
    throw std::invalid_argument("map_ks_to_aux: index_map must have N or 2^M entries");
  }
  std::vector<bool> used(dim, false);
  for (auto s : map) {
    if (s >= dim || used[s]) throw std::invalid_argument("map_ks_to_aux: index_map is not a permutation");
    used[s] = true;
  }
  for (std::uint64_t s = 0; s < dim; ++s) {
    if (!used[s]) map.push_back(s);
  }
  return map;
}

}  // namespace

double default_padding(const Eigen::MatrixXd& h) {
  const auto [lo, hi] = gershgorin(h);
  return h.diagonal().maxCoeff() + 10.0 * (hi - lo);
}

AuxHamiltonian map_ks_to_aux(const KsMatrix& h, const std::optional<std::vector<std::uint64_t>>& index_map,
                             std::optional<double> padding) {
  h.validate();
  const auto n = static_cast<std::uint64_t>(h.dim());
  if (n < 2) throw std::invalid_argument("map_ks_to_aux: need at least two orbitals");
  const int m = ceil_log2(n);
  if (m > kMaxDenseQubits) throw std::length_error("map_ks_to_aux: too many orbitals");
  const std::uint64_t dim = std::uint64_t{1} << m;

  AuxHamiltonian aux;
  aux.num_qubits = m;
  aux.n_logical = h.dim();
  aux.index_map = complete_index_map(index_map, n, dim);
  aux.padding_value = padding.value_or(default_padding(h.h));
  if (n < dim && aux.padding_value < gershgorin(h.h).second) {
    spdlog::warn("map_ks_to_aux: padding {} lies below the spectral upper bound {}; padding states may mix "
                 "into the occupied ensemble",
                 aux.padding_value, gershgorin(h.h).second);
  }

  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) {
      big(static_cast<Eigen::Index>(aux.index_map[i]), static_cast<Eigen::Index>(aux.index_map[j])) =
          h.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  for (std::uint64_t i = n; i < dim; ++i) {
    const auto s = static_cast<Eigen::Index>(aux.index_map[i]);
    big(s, s) = aux.padding_value;
  }
  // Symmetrize exactly so the Hermiticity check in the decomposition sees zero.
  big = (0.5 * (big + big.adjoint())).eval();
  aux.pauli = decompose_hermitian(big);
  return aux;
}

Eigen::MatrixXd aux_to_dense(const AuxHamiltonian& aux) {
  if (aux.num_qubits > kMaxDenseQubits) throw std::length_error("aux_to_dense: too many qubits");
  const Eigen::MatrixXcd m = aux.pauli.to_dense();
  return m.real();
}

}  // namespace qdft
