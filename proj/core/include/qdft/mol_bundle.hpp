#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace qdft {

inline constexpr const char* kBundleSchema = "qdft-bundle-v1";

enum class BundleErrorCode {
  io,
  schema,
  not_positive_definite,
  eri_symmetry,
  grid_weights,
  reference_density,
};

const char* to_string(BundleErrorCode code);

class BundleError : public std::runtime_error {
 public:
  BundleError(BundleErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  BundleErrorCode code() const { return code_; }

 private:
  BundleErrorCode code_;
};

/// Chemists'-notation two-electron integrals (pq|rs), stored row-major.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(Eigen::Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}

  Eigen::Index dim() const { return n_; }
  double operator()(Eigen::Index p, Eigen::Index q, Eigen::Index r, Eigen::Index s) const {
    return data_[index(p, q, r, s)];
  }
  double& operator()(Eigen::Index p, Eigen::Index q, Eigen::Index r, Eigen::Index s) {
    return data_[index(p, q, r, s)];
  }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// Largest deviation from the 8-fold permutational symmetry.
  double symmetry_error() const;

 private:
  std::size_t index(Eigen::Index p, Eigen::Index q, Eigen::Index r, Eigen::Index s) const {
    return static_cast<std::size_t>(((p * n_ + q) * n_ + r) * n_ + s);
  }
  Eigen::Index n_ = 0;
  std::vector<double> data_;
};

struct BundleReference {
  std::optional<double> energy;
  std::optional<double> exc;
  std::optional<Eigen::VectorXd> density;  ///< on the grid
};

struct MolBundle {
  Eigen::Index n_ao = 0;
  int n_electrons = 0;
  Eigen::MatrixXd overlap;
  Eigen::MatrixXd h_core;
  EriTensor eri;
  Eigen::MatrixXd grid_points;  ///< G x 3, bohr
  Eigen::VectorXd grid_weights;
  Eigen::MatrixXd ao_values;    ///< G x n_ao
  double e_nuc = 0.0;
  BundleReference reference;
  nlohmann::json metadata = nlohmann::json::object();

  /// Checks every invariant; throws BundleError with the matching code.
  void validate() const;
};

/// Parses and validates a `qdft-bundle-v1` document.
MolBundle parse_bundle(const nlohmann::json& doc);
MolBundle read_bundle(std::istream& in);
MolBundle load_bundle(const std::string& path);

nlohmann::json bundle_to_json(const MolBundle& bundle);

/// Integrals and grid values in the Lowdin-orthonormalized AO basis.
struct OrthoBasis {
  Eigen::MatrixXd x;  ///< S^{-1/2}
  Eigen::MatrixXd h_core;
  EriTensor eri;
  Eigen::MatrixXd ao_values;
};

/// X = U s^{-1/2} U^T. Throws BundleError(not_positive_definite) when the
/// smallest overlap eigenvalue is below 1e-8.
OrthoBasis lowdin_orthonormalize(const MolBundle& bundle);

/// (ij|kl) = sum X_pi X_qj X_rk X_sl (pq|rs), one index at a time.
EriTensor transform_eri(const EriTensor& eri, const Eigen::MatrixXd& x);

}  // namespace qdft
