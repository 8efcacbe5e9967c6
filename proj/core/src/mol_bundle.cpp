#include "qdft/mol_bundle.hpp"

#include <cmath>
#include <fstream>

namespace qdft {

const char* to_string(BundleErrorCode code) {
  switch (code) {
    case BundleErrorCode::io: return "io";
    case BundleErrorCode::schema: return "schema";
    case BundleErrorCode::not_positive_definite: return "not_positive_definite";
    case BundleErrorCode::eri_symmetry: return "eri_symmetry";
    case BundleErrorCode::grid_weights: return "grid_weights";
    case BundleErrorCode::reference_density: return "reference_density";
  }
  return "unknown";
}

double EriTensor::symmetry_error() const {
  double err = 0.0;
  for (Eigen::Index p = 0; p < n_; ++p)
    for (Eigen::Index q = 0; q < n_; ++q)
      for (Eigen::Index r = 0; r < n_; ++r)
        for (Eigen::Index s = 0; s < n_; ++s) {
          const double v = (*this)(p, q, r, s);
          err = std::max({err, std::abs(v - (*this)(q, p, r, s)), std::abs(v - (*this)(p, q, s, r)),
                          std::abs(v - (*this)(r, s, p, q))});
        }
  return err;
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) { throw BundleError(BundleErrorCode::schema, what); }

const json& field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) schema_error(std::string("missing field '") + name + "'");
  return *it;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) schema_error(what + " must be a number");
  return v.get<double>();
}

Eigen::MatrixXd matrix(const json& v, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    schema_error(what + " must have " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      schema_error(what + " row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = number(row[static_cast<std::size_t>(j)], what);
  }
  return m;
}

Eigen::VectorXd vector(const json& v, Eigen::Index size, const std::string& what) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != size) {
    schema_error(what + " must have " + std::to_string(size) + " entries");
  }
  Eigen::VectorXd out(size);
  for (Eigen::Index i = 0; i < size; ++i) out(i) = number(v[static_cast<std::size_t>(i)], what);
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

void MolBundle::validate() const {
  if (n_ao < 1) schema_error("n_ao must be positive");
  if (n_electrons < 2 || n_electrons % 2 != 0 || n_electrons > 2 * n_ao) {
    schema_error("n_electrons must be even and in [2, 2 n_ao]");
  }
  if ((overlap - overlap.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw BundleError(BundleErrorCode::not_positive_definite, "overlap is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(overlap, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-8) {
    throw BundleError(BundleErrorCode::not_positive_definite,
                      "smallest overlap eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  if ((h_core - h_core.transpose()).cwiseAbs().maxCoeff() > 1e-10) schema_error("h_core is not symmetric");
  if (eri.dim() != n_ao) schema_error("eri has the wrong dimension");
  if (const double e = eri.symmetry_error(); e > 1e-10) {
    throw BundleError(BundleErrorCode::eri_symmetry, "8-fold symmetry violated by " + std::to_string(e));
  }
  const Eigen::Index g = grid_weights.size();
  if (grid_points.rows() != g || (g > 0 && grid_points.cols() != 3) || ao_values.rows() != g ||
      (g > 0 && ao_values.cols() != n_ao)) {
    schema_error("grid, weights and ao_values disagree in size");
  }
  for (Eigen::Index i = 0; i < g; ++i) {
    if (!(grid_weights(i) > 0.0)) throw BundleError(BundleErrorCode::grid_weights, "non-positive grid weight");
  }
  if (reference.density) {
    if (reference.density->size() != g) schema_error("reference density must have one value per grid point");
    const double integral = grid_weights.dot(*reference.density);
    if (std::abs(integral - n_electrons) > 1e-4) {
      throw BundleError(BundleErrorCode::reference_density,
                        "reference density integrates to " + std::to_string(integral));
    }
  }
}

MolBundle parse_bundle(const json& doc) {
  if (!doc.is_object()) schema_error("document is not an object");
  const auto& schema = field(doc, "schema");
  if (!schema.is_string() || schema.get<std::string>() != kBundleSchema) {
    schema_error(std::string("unsupported schema, expected ") + kBundleSchema);
  }
  MolBundle b;
  const auto& n = field(doc, "n_ao");
  if (!n.is_number_integer() || n.get<long long>() < 1) schema_error("n_ao must be a positive integer");
  b.n_ao = n.get<Eigen::Index>();
  const auto& ne = field(doc, "n_electrons");
  if (!ne.is_number_integer()) schema_error("n_electrons must be an integer");
  b.n_electrons = ne.get<int>();
  b.overlap = matrix(field(doc, "overlap"), b.n_ao, b.n_ao, "overlap");
  b.h_core = matrix(field(doc, "h_core"), b.n_ao, b.n_ao, "h_core");

  const auto& eri = field(doc, "eri");
  const auto n4 = static_cast<std::size_t>(b.n_ao * b.n_ao * b.n_ao * b.n_ao);
  if (!eri.is_array() || eri.size() != n4) schema_error("eri must be a flat array of n_ao^4 numbers");
  b.eri = EriTensor(b.n_ao);
  for (std::size_t i = 0; i < n4; ++i) b.eri.data()[i] = number(eri[i], "eri");

  const auto& grid = field(doc, "grid");
  if (!grid.is_object()) schema_error("grid must be an object");
  const auto& w = field(grid, "weights");
  if (!w.is_array()) schema_error("grid.weights must be an array");
  const auto g = static_cast<Eigen::Index>(w.size());
  b.grid_weights = vector(w, g, "grid.weights");
  b.grid_points = g > 0 ? matrix(field(grid, "points"), g, 3, "grid.points") : Eigen::MatrixXd(0, 3);
  b.ao_values = g > 0 ? matrix(field(doc, "ao_values"), g, b.n_ao, "ao_values") : Eigen::MatrixXd(0, b.n_ao);
  b.e_nuc = number(field(doc, "e_nuc"), "e_nuc");

  if (auto it = doc.find("reference"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) schema_error("reference must be an object");
    if (auto e = it->find("energy"); e != it->end() && !e->is_null()) b.reference.energy = number(*e, "reference.energy");
    if (auto e = it->find("exc"); e != it->end() && !e->is_null()) b.reference.exc = number(*e, "reference.exc");
    if (auto d = it->find("density"); d != it->end() && !d->is_null()) {
      b.reference.density = vector(*d, g, "reference.density");
    }
  }
  if (auto it = doc.find("metadata"); it != doc.end()) b.metadata = *it;
  b.validate();
  return b;
}

MolBundle read_bundle(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    schema_error(std::string("malformed JSON: ") + e.what());
  }
  return parse_bundle(doc);
}

MolBundle load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BundleError(BundleErrorCode::io, "cannot open " + path);
  return read_bundle(in);
}

json bundle_to_json(const MolBundle& b) {
  json doc;
  doc["schema"] = kBundleSchema;
  doc["n_ao"] = b.n_ao;
  doc["n_electrons"] = b.n_electrons;
  doc["overlap"] = to_json(b.overlap);
  doc["h_core"] = to_json(b.h_core);
  doc["eri"] = b.eri.data();
  doc["grid"] = {{"points", to_json(b.grid_points)}, {"weights", to_json(b.grid_weights)}};
  doc["ao_values"] = to_json(b.ao_values);
  doc["e_nuc"] = b.e_nuc;
  json ref = json::object();
  if (b.reference.energy) ref["energy"] = *b.reference.energy;
  if (b.reference.exc) ref["exc"] = *b.reference.exc;
  if (b.reference.density) ref["density"] = to_json(*b.reference.density);
  doc["reference"] = ref;
  doc["metadata"] = b.metadata;
  return doc;
}

EriTensor transform_eri(const EriTensor& eri, const Eigen::MatrixXd& x) {
  const Eigen::Index n = eri.dim();
  if (x.rows() != n || x.cols() != n) throw std::invalid_argument("transform_eri: dimension mismatch");
  // Four quarter transformations; each contracts the leading index and
  // rotates it to the back, so after four passes the order is restored.
  EriTensor cur = eri;
  for (int pass = 0; pass < 4; ++pass) {
    EriTensor next(n);
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index s = 0; s < n; ++s)
          for (Eigen::Index i = 0; i < n; ++i) {
            double v = 0.0;
            for (Eigen::Index p = 0; p < n; ++p) v += x(p, i) * cur(p, q, r, s);
            next(q, r, s, i) = v;
          }
    cur = std::move(next);
  }
  return cur;
}

OrthoBasis lowdin_orthonormalize(const MolBundle& bundle) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bundle.overlap);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 1e-8) {
    throw BundleError(BundleErrorCode::not_positive_definite, "overlap is singular or indefinite");
  }
  OrthoBasis o;
  const Eigen::MatrixXd& u = es.eigenvectors();
  o.x = u * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() * u.transpose();
  o.h_core = o.x.transpose() * bundle.h_core * o.x;
  o.eri = transform_eri(bundle.eri, o.x);
  o.ao_values = bundle.ao_values * o.x;
  return o;
}

}  // namespace qdft
