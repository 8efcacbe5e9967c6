#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdft/pauli.hpp"

namespace qdft {

enum class SpinBlock { alpha, beta, full };

/// Real symmetric one-body Kohn-Sham matrix.
struct KsMatrix {
  Eigen::MatrixXd h;
  std::vector<std::string> basis_labels;
  SpinBlock spin_block = SpinBlock::full;

  KsMatrix() = default;
  explicit KsMatrix(Eigen::MatrixXd matrix, SpinBlock block = SpinBlock::full);

  Eigen::Index dim() const { return h.rows(); }

  /// Throws std::invalid_argument unless square, finite and symmetric to `tol`.
  void validate(double tol = 1e-12) const;
};

/// Reads the text format: first line `N`, then N rows of N reals.
KsMatrix read_ks_matrix(std::istream& in);
KsMatrix read_ks_matrix_file(const std::string& path);
void write_ks_matrix(std::ostream& out, const KsMatrix& h);

/// Extracts the spatial N x N block from a 2N x 2N spin-orbital matrix
/// ordered as [alpha orbitals, beta orbitals]. Throws std::invalid_argument
/// for open-shell input (off-diagonal spin coupling, or alpha != beta beyond
/// `tol`).
KsMatrix select_spin_block(const KsMatrix& h_full, double tol = 1e-10);

/// Qubit operator whose 2^M x 2^M matrix holds the KS matrix on the basis
/// states selected by `index_map`.
struct AuxHamiltonian {
  PauliSum pauli;
  int num_qubits = 0;
  Eigen::Index n_logical = 0;
  double padding_value = 0.0;
  /// index_map[i] is the basis state carrying orbital i; entries i >= N are
  /// the padding states. Always a permutation of {0 .. 2^M - 1}.
  std::vector<std::uint64_t> index_map;
};

/// Default diagonal value for padding states: max(diag h) plus ten times the
/// Gershgorin estimate of the spectral width.
double default_padding(const Eigen::MatrixXd& h);

/// Maps h onto M = ceil(log2 N) qubits. `index_map` may have N entries
/// (injective; the remaining basis states become padding in ascending order)
/// or 2^M entries (bijective). Throws std::invalid_argument for N < 2 or a bad
/// permutation; a padding value below the Gershgorin upper bound of the
/// spectrum only logs a warning.
AuxHamiltonian map_ks_to_aux(const KsMatrix& h,
                             const std::optional<std::vector<std::uint64_t>>& index_map = std::nullopt,
                             std::optional<double> padding = std::nullopt);

/// Dense real rebuild of the aux operator. Throws std::length_error for M > 12.
Eigen::MatrixXd aux_to_dense(const AuxHamiltonian& aux);

}  // namespace qdft
