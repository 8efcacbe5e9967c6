#include <random>

#include <benchmark/benchmark.h>

#include "qdft/aux_mapping.hpp"
#include "qdft/ensemble_vqe.hpp"
#include "qdft/pauli.hpp"
#include "qdft/reference.hpp"
#include "qdft/soft_hubbard.hpp"
#include "qdft/statevector.hpp"

using namespace qdft;

namespace {

Eigen::MatrixXd random_symmetric(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) h(i, j) = h(j, i) = u(rng);
  return h;
}

AnsatzSpec random_ansatz(int m, int layers) {
  AnsatzSpec a = AnsatzSpec::zeros(m, layers);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (auto& p : a.params) p = angle(rng);
  return a;
}

}  // namespace

static void BM_Decompose(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const KsMatrix h(random_symmetric(n, 1));
  for (auto _ : state) benchmark::DoNotOptimize(map_ks_to_aux(h));
}
BENCHMARK(BM_Decompose)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void BM_Ansatz(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const auto a = random_ansatz(m, 4);
  for (auto _ : state) benchmark::DoNotOptimize(run_ry_ansatz(a, 0));
}
BENCHMARK(BM_Ansatz)->Arg(3)->Arg(6)->Arg(10);

static void BM_ExpectationExact(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto aux = map_ks_to_aux(KsMatrix(random_symmetric(n, 2)));
  const auto psi = run_ry_ansatz(random_ansatz(aux.num_qubits, 4), 0);
  for (auto _ : state) benchmark::DoNotOptimize(expectation_exact(psi, aux.pauli));
}
BENCHMARK(BM_ExpectationExact)->Arg(8)->Arg(32);

static void BM_ExpectationSampled(benchmark::State& state) {
  const auto aux = map_ks_to_aux(KsMatrix(random_symmetric(8, 4)));
  const auto psi = run_ry_ansatz(random_ansatz(3, 4), 0);
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_expectation_sampled(psi, aux.pauli, ShotBudget{shots, ShotAllocation::per_group, seed++}));
  }
}
BENCHMARK(BM_ExpectationSampled)->Arg(10'000)->Arg(1'000'000);

static void BM_ParameterShiftGradient(benchmark::State& state) {
  const auto aux = map_ks_to_aux(KsMatrix(random_symmetric(8, 5)));
  const auto a = random_ansatz(3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(gradient_parameter_shift(a, 0, aux.pauli));
}
BENCHMARK(BM_ParameterShiftGradient);

static void BM_ClassicalSoftScf(benchmark::State& state) {
  const auto spec = HubbardSpec::benchmark(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classical_scf(spec));
}
BENCHMARK(BM_ClassicalSoftScf)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
