#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qdft/reference.hpp"

using namespace qdft;

TEST_CASE("Diagonalize small matrices", "[reference]") {
  Eigen::Matrix2d m;
  m << 2, 1, 1, 2;
  const auto r = diagonalize(KsMatrix(m));
  CHECK(r.eigenvalues(0) == Catch::Approx(1.0));
  CHECK(r.eigenvalues(1) == Catch::Approx(3.0));
  const double s = 1.0 / std::sqrt(2.0);
  // Largest component positive, first one on the tie.
  CHECK(r.eigenvectors(0, 0) == Catch::Approx(s));
  CHECK(r.eigenvectors(1, 0) == Catch::Approx(-s));
  CHECK(r.eigenvectors(0, 1) == Catch::Approx(s));

  Eigen::Matrix3d d = Eigen::Vector3d(3, -1, 2).asDiagonal();
  const auto rd = diagonalize(KsMatrix(d));
  CHECK(rd.eigenvalues == Eigen::Vector3d(-1, 2, 3));
  CHECK(rd.eigenvectors(1, 0) == 1.0);

  Eigen::Matrix2d bad;
  bad << 1, 2, 0, 1;
  CHECK_THROWS_AS(diagonalize(KsMatrix(bad)), std::invalid_argument);
}

TEST_CASE("Eigenpairs of random symmetric matrices", "[reference][property]") {
  std::mt19937_64 rng(81);
  for (int n : {2, 5, 8, 13}) {
    const auto h = oracle::random_symmetric(n, rng, 2.0);
    const auto r = diagonalize(KsMatrix(h));
    const auto& v = r.eigenvectors;
    CHECK((h * v - v * r.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 1; i < n; ++i) CHECK(r.eigenvalues(i) >= r.eigenvalues(i - 1));
    for (int k = 0; k < n; ++k) {
      Eigen::Index arg;
      v.col(k).cwiseAbs().maxCoeff(&arg);
      CHECK(v(arg, k) > 0.0);
    }
    const auto again = diagonalize(KsMatrix(h));
    CHECK(again.eigenvalues == r.eigenvalues);
    CHECK(again.eigenvectors == r.eigenvectors);
  }
}

TEST_CASE("Lowest aux eigenvalues equal the KS spectrum", "[reference]") {
  std::mt19937_64 rng(82);
  for (int n : {3, 6, 8}) {
    const auto h = oracle::random_symmetric(n, rng, 1.0);
    const auto aux = map_ks_to_aux(KsMatrix(h));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(aux_to_dense(aux));
    const auto r = diagonalize(KsMatrix(h));
    CHECK((es.eigenvalues().head(n) - r.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Classical orbital solver", "[reference]") {
  std::mt19937_64 rng(83);
  const auto h = oracle::random_symmetric(6, rng, 1.0);
  ClassicalOrbitalSolver solver;
  const auto sol = solver.solve(KsMatrix(h), 2, DensityRequest{}, 0);
  REQUIRE(sol.energies.size() == 2);
  CHECK(sol.density.trace() == Catch::Approx(2.0));
  CHECK((sol.density * sol.density - sol.density).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_FALSE(solver.stochastic());
  CHECK(solver.name() == "classical");
}

TEST_CASE("Driver with an injected classical solver equals the convenience entry point", "[reference]") {
  const auto spec = HubbardSpec::benchmark(2.0);
  ClassicalOrbitalSolver solver;
  const auto a = run_soft_scf(spec, solver);
  const auto b = classical_scf(spec);
  CHECK(a.total_energy == b.total_energy);
  CHECK(a.iterations == b.iterations);
  CHECK(a.occupations == b.occupations);
}
