#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "qdft/pauli.hpp"

using namespace qdft;

namespace {

Eigen::MatrixXcd rebuild(const PauliSum& s) {
  const Eigen::Index dim = Eigen::Index{1} << s.num_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, c] : s.terms()) m += c * oracle::dense_pauli(p.str());
  return m;
}

std::string random_letters(int m, std::mt19937_64& rng) {
  static const char kLetters[] = "IXYZ";
  std::string s;
  for (int i = 0; i < m; ++i) s += kLetters[rng() % 4];
  return s;
}

}  // namespace

TEST_CASE("Pauli strings parse, print and locate letters by bit", "[pauli]") {
  const auto p = PauliString::parse("XZI");
  CHECK(p.num_qubits() == 3);
  CHECK(p.str() == "XZI");
  CHECK(p.at(2) == Pauli::X);
  CHECK(p.at(1) == Pauli::Z);
  CHECK(p.at(0) == Pauli::I);
  CHECK(p.x_mask() == 0b100);
  CHECK(p.z_mask() == 0b010);
  CHECK(PauliString::parse("IYI").y_count() == 1);
  CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
}

TEST_CASE("Canonical order is lexicographic from the left with I<X<Y<Z", "[pauli]") {
  std::vector<std::string> words{"ZI", "IX", "XX", "YI", "II", "IZ", "XZ"};
  std::set<PauliString> sorted;
  for (const auto& w : words) sorted.insert(PauliString::parse(w));
  std::vector<std::string> got;
  for (const auto& p : sorted) got.push_back(p.str());
  CHECK(got == std::vector<std::string>{"II", "IX", "IZ", "XX", "XZ", "YI", "ZI"});
}

TEST_CASE("Basis-state action of a string matches its dense matrix", "[pauli][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 4);
    const auto letters = random_letters(m, rng);
    const auto p = PauliString::parse(letters);
    const auto dense = oracle::dense_pauli(letters);
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << m); ++j) {
      const auto i = j ^ p.x_mask();
      REQUIRE(std::abs(dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - p.phase(j)) < 1e-15);
    }
  }
}

TEST_CASE("Qubit-wise commutation", "[pauli]") {
  CHECK(PauliString::parse("XIZ").qubitwise_commutes(PauliString::parse("XYI")));
  CHECK_FALSE(PauliString::parse("XIZ").qubitwise_commutes(PauliString::parse("ZII")));
  CHECK(PauliString::parse("III").qubitwise_commutes(PauliString::parse("YYY")));
}

TEST_CASE("decompose_hermitian on closed-form matrices", "[pauli]") {
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  const auto s = decompose_hermitian(z);
  REQUIRE(s.size() == 1);
  CHECK(s.coefficient(PauliString::parse("Z")) == cplx(1.0, 0.0));

  const auto id = decompose_hermitian(Eigen::MatrixXcd::Identity(8, 8));
  REQUIRE(id.size() == 1);
  CHECK(id.coefficient(PauliString::parse("III")) == cplx(1.0, 0.0));
}

TEST_CASE("decompose_hermitian round-trips random Hermitian matrices", "[pauli][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd h = oracle::random_symmetric(8, rng);
    const auto s = decompose_hermitian(h.cast<cplx>(), 0.0);
    CHECK(s.is_hermitian());
    CHECK((rebuild(s) - h.cast<cplx>()).cwiseAbs().maxCoeff() < 1e-12);
  }
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(16, 16);
    const Eigen::MatrixXcd h = a + a.adjoint();
    const auto s = decompose_hermitian(h, 0.0);
    CHECK((rebuild(s) - h).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s.to_dense() - h).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("decompose_hermitian rejects bad input", "[pauli]") {
  CHECK_THROWS_AS(decompose_hermitian(Eigen::MatrixXcd::Identity(3, 3)), std::invalid_argument);
  Eigen::MatrixXcd n(2, 2);
  n << 0, 1, 0, 0;
  CHECK_THROWS_AS(decompose_hermitian(n), std::invalid_argument);
  CHECK_THROWS_AS(decompose_hermitian(Eigen::MatrixXcd::Identity(2, 4)), std::invalid_argument);
}

TEST_CASE("Projector pairs on closed-form cases", "[pauli][projector]") {
  const auto x = projector_pair_to_pauli(0, 1, 1);
  REQUIRE(x.size() == 1);
  CHECK(x.coefficient(PauliString::parse("X")).real() == Catch::Approx(1.0));

  const auto p0 = projector_pair_to_pauli(0, 0, 1);
  REQUIRE(p0.size() == 2);
  CHECK(p0.coefficient(PauliString::parse("I")).real() == Catch::Approx(0.5));
  CHECK(p0.coefficient(PauliString::parse("Z")).real() == Catch::Approx(0.5));

  const auto g03 = projector_pair_to_pauli(0, 3, 2);
  REQUIRE(g03.size() == 2);
  CHECK(g03.coefficient(PauliString::parse("XX")).real() == Catch::Approx(0.5));
  CHECK(g03.coefficient(PauliString::parse("YY")).real() == Catch::Approx(-0.5));
}

TEST_CASE("Projector pairs rebuild |I><J| + h.c. exactly for M <= 3", "[pauli][projector][property]") {
  for (int m = 1; m <= 3; ++m) {
    const std::uint64_t dim = std::uint64_t{1} << m;
    for (std::uint64_t i = 0; i < dim; ++i) {
      for (std::uint64_t j = 0; j < dim; ++j) {
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        expected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += 1.0;
        if (i != j) expected(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += 1.0;
        const auto s = projector_pair_to_pauli(i, j, m);
        CHECK(s.is_hermitian(0.0));
        REQUIRE((rebuild(s) - expected).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(projector_pair_to_pauli(0, 4, 2), std::out_of_range);
}

TEST_CASE("Pauli products follow the multiplication table", "[pauli][property]") {
  PauliSum x(1), y(1);
  x.add(PauliString::parse("X"), 1.0);
  y.add(PauliString::parse("Y"), 1.0);
  const auto xy = x * y;
  REQUIRE(xy.size() == 1);
  CHECK(std::abs(xy.coefficient(PauliString::parse("Z")) - cplx(0, 1)) < 1e-15);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 3);
    PauliSum a(m), b(m);
    a.add(PauliString::parse(random_letters(m, rng)), cplx(0.3, -0.1));
    a.add(PauliString::parse(random_letters(m, rng)), 1.1);
    b.add(PauliString::parse(random_letters(m, rng)), -0.7);
    CHECK(((a * b).to_dense() - a.to_dense() * b.to_dense()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("Text serialization round-trips coefficients exactly", "[pauli]") {
  std::mt19937_64 rng(5);
  const auto s = decompose_hermitian(oracle::random_symmetric(4, rng).cast<cplx>());
  const auto back = PauliSum::from_text(s.to_text());
  REQUIRE(back.size() == s.size());
  for (const auto& [p, c] : s.terms()) CHECK(back.coefficient(p) == c);
}

TEST_CASE("Prune drops small coefficients", "[pauli]") {
  PauliSum s(2);
  s.add(PauliString::parse("XI"), 1e-14);
  s.add(PauliString::parse("ZZ"), 0.5);
  s.prune();
  CHECK(s.size() == 1);
}

TEST_CASE("Greedy grouping yields qubit-wise commuting partitions", "[pauli][grouping][property]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sum = decompose_hermitian(oracle::random_symmetric(8, rng).cast<cplx>());
    const auto groups = group_commuting(sum);
    std::size_t count = 0;
    std::set<PauliString> seen;
    for (const auto& g : groups) {
      REQUIRE(g.basis.size() == 3);
      for (const auto& p : g.strings) {
        CHECK(seen.insert(p).second);
        for (int b = 0; b < 3; ++b) {
          if (p.at(b) != Pauli::I) CHECK(p.at(b) == g.basis[static_cast<std::size_t>(b)]);
        }
        for (const auto& q : g.strings) CHECK(p.qubitwise_commutes(q));
      }
      count += g.strings.size();
    }
    CHECK(count == sum.size());
    // Deterministic.
    const auto again = group_commuting(sum);
    REQUIRE(again.size() == groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) CHECK(again[i].strings == groups[i].strings);
  }
}

TEST_CASE("Dense conversion refuses huge registers", "[pauli]") {
  PauliSum big(kMaxDenseQubits + 1);
  CHECK_THROWS(big.to_dense());
}

TEST_CASE("ceil_log2", "[pauli]") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(8) == 3);
  CHECK(ceil_log2(9) == 4);
}
