#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "oracles.hpp"
#include "qdft/rng.hpp"
#include "qdft/statevector.hpp"

using namespace qdft;

namespace {

MeasurementGroup z_group(int m) {
  MeasurementGroup g;
  g.strings.push_back(PauliString(m, 0, 1));
  g.basis.assign(static_cast<std::size_t>(m), Pauli::Z);
  return g;
}

StateVector plus_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return StateVector(1, std::vector<cplx>{r, r});
}

}  // namespace

TEST_CASE("Counter RNG is a pure function of key and counter", "[rng]") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a() == b());
  CounterRng c(42, 50);
  CounterRng d(42);
  for (int i = 0; i < 50; ++i) d();
  CHECK(c() == d());
  CHECK(derive_key(1, {2, 3}) != derive_key(1, {3, 2}));
  CHECK(derive_key(1, {2, 3}) == derive_key(1, {2, 3}));
  // SplitMix64 reference output for state 0 after one increment.
  CHECK(splitmix64_mix(0x9e3779b97f4a7c15ULL) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("Sampling a basis state is deterministic", "[sampling]") {
  const auto counts = sample_group(StateVector(1, 0), z_group(1), 1000, 7);
  REQUIRE(counts.size() == 1);
  CHECK(counts.at(0) == 1000);
}

TEST_CASE("Bernoulli(1/2) statistics", "[sampling]") {
  const auto counts = sample_group(plus_state(), z_group(1), 1'000'000, 8);
  const double f0 = static_cast<double>(counts.at(0)) / 1e6;
  CHECK(std::abs(f0 - 0.5) < 0.002);
  CHECK(sample_group(plus_state(), z_group(1), 1'000'000, 8) == counts);
  CHECK_THROWS_AS(sample_group(plus_state(), MeasurementGroup{}, 10, 8), std::invalid_argument);
  CHECK_THROWS_AS(sample_group(plus_state(), z_group(1), 0, 8), std::invalid_argument);
}

TEST_CASE("Multinomial counts add up and follow the probabilities", "[sampling][property]") {
  const std::vector<double> p{0.1, 0.0, 0.25, 0.65};
  const std::uint64_t shots = 200000;
  const auto c = sample_multinomial(p, shots, 9);
  CHECK(std::accumulate(c.begin(), c.end(), std::uint64_t{0}) == shots);
  CHECK(c[1] == 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double sigma = std::sqrt(shots * p[i] * (1 - p[i]));
    CHECK(std::abs(static_cast<double>(c[i]) - shots * p[i]) <= 5 * sigma + 1e-9);
  }
}

TEST_CASE("Measuring X and Y uses the rotated basis", "[sampling]") {
  MeasurementGroup gx;
  gx.strings.push_back(PauliString::parse("X"));
  gx.basis = {Pauli::X};
  const auto cx = sample_group(plus_state(), gx, 1000, 10);
  CHECK(string_expectation_from_counts(PauliString::parse("X"), cx) == 1.0);

  const double r = 1.0 / std::sqrt(2.0);
  StateVector plus_i(1, std::vector<cplx>{r, cplx(0, r)});
  MeasurementGroup gy;
  gy.strings.push_back(PauliString::parse("Y"));
  gy.basis = {Pauli::Y};
  CHECK(string_expectation_from_counts(PauliString::parse("Y"), sample_group(plus_i, gy, 1000, 11)) == 1.0);
}

TEST_CASE("Sampled estimator on trivial operators", "[sampling]") {
  PauliSum id = PauliSum::identity(2, 1.7);
  CHECK(estimate_expectation_sampled(StateVector(2, 1), id, ShotBudget{10, ShotAllocation::per_group, 1}) == 1.7);
  PauliSum z(1);
  z.add(PauliString::parse("Z"), 1.0);
  for (std::uint64_t shots : {1, 7, 1000}) {
    CHECK(estimate_expectation_sampled(StateVector(1, 0), z, ShotBudget{shots, ShotAllocation::per_group, 3}) == 1.0);
  }
}

TEST_CASE("Shot plans split shots by group or by term", "[sampling]") {
  PauliSum op(2);
  op.add(PauliString::parse("ZI"), 1.0);
  op.add(PauliString::parse("IZ"), 1.0);
  op.add(PauliString::parse("XX"), 1.0);
  op.add(PauliString::parse("II"), 1.0);
  const auto pg = make_measurement_plan(op, ShotBudget{11, ShotAllocation::per_group, 0});
  REQUIRE(pg.groups.size() == 2);
  CHECK(pg.shots == std::vector<std::uint64_t>{6, 5});
  const auto pt = make_measurement_plan(op, ShotBudget{11, ShotAllocation::per_term, 0});
  REQUIRE(pt.groups.size() == 3);
  CHECK(pt.shots == std::vector<std::uint64_t>{4, 4, 3});
  CHECK_THROWS_AS(make_measurement_plan(op, ShotBudget{1, ShotAllocation::per_group, 0}), std::invalid_argument);
}

TEST_CASE("Sampled estimator is unbiased", "[sampling][property]") {
  std::mt19937_64 rng(31);
  const auto op = decompose_hermitian(oracle::random_symmetric(8, rng).cast<cplx>());
  AnsatzSpec spec = AnsatzSpec::zeros(3, 2);
  spec.params = oracle::random_angles(spec.expected_param_count(), rng);
  const auto psi = run_ry_ansatz(spec, 0);
  const double exact = expectation_exact(psi, op);
  const int n = 400;
  double sum = 0.0, sum2 = 0.0;
  for (int seed = 0; seed < n; ++seed) {
    const double e = estimate_expectation_sampled(psi, op, ShotBudget{2000, ShotAllocation::per_group,
                                                                      static_cast<std::uint64_t>(seed)});
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
  CHECK(std::abs(mean - exact) < 5 * se);
}

TEST_CASE("Identical seeds give bit-identical estimates", "[sampling]") {
  std::mt19937_64 rng(32);
  const auto op = decompose_hermitian(oracle::random_symmetric(4, rng).cast<cplx>());
  AnsatzSpec spec = AnsatzSpec::zeros(2, 1);
  spec.params = oracle::random_angles(spec.expected_param_count(), rng);
  const auto psi = run_ry_ansatz(spec, 1);
  const ShotBudget b{12345, ShotAllocation::per_group, 99};
  CHECK(estimate_expectation_sampled(psi, op, b) == estimate_expectation_sampled(psi, op, b));
}
