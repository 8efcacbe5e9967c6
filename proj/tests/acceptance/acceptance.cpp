// Acceptance gate: one PASS/FAIL line per primary criterion, plus INFO lines
// for the secondary molecular checks. Exits nonzero on any primary failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdft/aux_mapping.hpp"
#include "qdft/balda.hpp"
#include "qdft/ensemble_vqe.hpp"
#include "qdft/experiment.hpp"
#include "qdft/mol_dft.hpp"
#include "qdft/pauli.hpp"
#include "qdft/quantum_solver.hpp"
#include "qdft/reference.hpp"
#include "qdft/soft_hubbard.hpp"

using namespace qdft;

namespace {

// Tolerances, pinned.
constexpr double kMapTol = 1e-10;
constexpr double kMapSeconds = 5.0;
constexpr double kProjectorTol = 1e-12;
constexpr double kSoftExactTol = 1e-5;
constexpr double kSoftExactSeconds = 600.0;
constexpr double kSoftSampled1e5 = 1e-1;
constexpr double kSoftSampled1e6 = 1e-2;
constexpr int kSoftSeeds = 5;
constexpr double kSoftSampledSeconds = 7200.0;
constexpr double kOrderingTol = 1e-5;
constexpr int kOrderingTrials = 20;
constexpr int kOrderingRequired = 18;
constexpr double kSlope = -0.5;
constexpr double kSlopeTol = 0.15;
constexpr int kSlopeSeeds = 20;
constexpr double kBetaTol = 1e-8;
constexpr double kVhxcTol = 1e-6;
constexpr double kToyTol = 1e-6;
constexpr double kH8QuantumTol = 5e-4;
constexpr double kH8ReferenceTol = 1e-6;

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const std::string& name, const std::string& detail) {
  std::printf("INFO %s: %s\n", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string strf(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) h(i, j) = h(j, i) = u(rng);
  return h;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void mapping_faithfulness() {
  std::mt19937_64 rng(2024);
  const int sizes[] = {4, 8, 16};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = sizes[trial % 3];
    const Eigen::MatrixXd h = random_symmetric(n, rng);
    const auto aux = map_ks_to_aux(KsMatrix(h));
    Eigen::VectorXd expected(Eigen::Index{1} << aux.num_qubits);
    expected.head(n) = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    expected.tail(expected.size() - n).setConstant(aux.padding_value);
    std::sort(expected.begin(), expected.end());
    const Eigen::VectorXd got =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(aux_to_dense(aux), Eigen::EigenvaluesOnly).eigenvalues();
    worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());
  }
  const double dt = seconds_since(t0);
  report(worst < kMapTol && dt < kMapSeconds, "mapping-faithfulness",
         strf("100 matrices N in {4,8,16}, max eigenvalue error %.3e (tol %.0e), %.2f s (limit %.0f s)", worst, kMapTol,
             dt, kMapSeconds));
}

void projector_expansion() {
  double worst = 0.0;
  int pairs = 0;
  for (int m = 1; m <= 3; ++m) {
    const std::uint64_t dim = std::uint64_t{1} << m;
    for (std::uint64_t i = 0; i < dim; ++i)
      for (std::uint64_t j = 0; j < dim; ++j) {
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(dim, dim);
        expected(i, j) += 1.0;
        if (i != j) expected(j, i) += 1.0;
        const Eigen::MatrixXcd got = projector_pair_to_pauli(i, j, m).to_dense();
        worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());
        ++pairs;
      }
  }
  report(worst < kProjectorTol, "projector-expansion",
         strf("%d (I,J) pairs for M <= 3, max dense error %.3e (tol %.0e)", pairs, worst, kProjectorTol));
}

void soft_noiseless() {
  ExperimentConfig c;
  c.solver = SolverKind::quantum_exact;
  const auto t0 = std::chrono::steady_clock::now();
  const auto records = run_experiment(c);
  const double dt = seconds_since(t0);
  double worst = 0.0;
  std::string per_u;
  for (const auto& r : records) {
    worst = std::max(worst, r.abs_error);
    per_u += strf(" U=%s:%.1e", r.sweep.c_str(), r.abs_error);
  }
  report(worst < kSoftExactTol && dt < kSoftExactSeconds && records.size() == 7, "soft-noiseless",
         strf("quantum-exact vs classical, N_L=4, max |dE0| %.3e t (tol %.0e),%s, %.1f s", worst, kSoftExactTol,
             per_u.c_str(), dt));
}

void soft_sampled() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (const auto& [shots, tol] : {std::pair{std::uint64_t{100'000}, kSoftSampled1e5},
                                   std::pair{std::uint64_t{1'000'000}, kSoftSampled1e6}}) {
    std::vector<double> errors;
    for (int s = 0; s < kSoftSeeds; ++s) {
      ExperimentConfig c;
      c.solver = SolverKind::quantum_sampled;
      c.shots = shots;
      c.seed = 100 + static_cast<std::uint64_t>(s);
      c.u_grid = {4.0};
      errors.push_back(run_experiment(c).front().abs_error);
    }
    const double med = median(errors);
    pass = pass && med < tol;
    detail += strf("%s%.0e shots median |dE0| %.3e t (tol %.0e) [", detail.empty() ? "" : "; ", double(shots), med,
                  tol);
    for (std::size_t k = 0; k < errors.size(); ++k) detail += strf(k ? " %.1e" : "%.1e", errors[k]);
    detail += "]";
  }
  const double dt = seconds_since(t0);
  report(pass && dt < kSoftSampledSeconds, "soft-sampled",
         strf("U/t=4, SPSA, 20 KS iterations, %d seeds: %s, %.1f s", kSoftSeeds, detail.c_str(), dt));
}

void ensemble_ordering() {
  std::mt19937_64 rng(7);
  int hits = 0;
  double worst_hit = 0.0;
  for (int trial = 0; trial < kOrderingTrials; ++trial) {
    const Eigen::MatrixXd h = random_symmetric(8, rng);
    const Eigen::VectorXd lambda =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    const auto aux = map_ks_to_aux(KsMatrix(h));
    auto spec = EnsembleSpec::standard(3, 4, 2);
    QuasiNewtonConfig qn;
    qn.seed = static_cast<std::uint64_t>(trial);
    const auto r = minimize_ensemble(spec, aux, qn, EvaluationMode::exact());
    double err = 0.0;
    for (std::size_t k = 0; k < r.state_energies.size(); ++k)
      err = std::max(err, std::abs(r.state_energies[k] - lambda(static_cast<Eigen::Index>(k))));
    if (err < kOrderingTol) {
      ++hits;
      worst_hit = std::max(worst_hit, err);
    }
  }
  report(hits >= kOrderingRequired, "ensemble-ordering",
         strf("%d/%d random 8x8 instances (N_occ=2, N_L=4) match eigenvalues by weight rank within %.0e (need %d)",
             hits, kOrderingTrials, kOrderingTol, kOrderingRequired));
}

void shot_noise_scaling() {
  // A fixed non-trivial state and Hamiltonian: the U/t=4 chain's first KS
  // matrix and a random ansatz point.
  const auto spec = HubbardSpec::benchmark(4.0);
  const Eigen::VectorXd n0 = Eigen::VectorXd::Constant(8, 0.5);
  const auto aux = map_ks_to_aux(build_hubbard_onebody(spec, balda_potential(spec, n0)));
  AnsatzSpec ansatz = AnsatzSpec::zeros(3, 4);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (auto& p : ansatz.params) p = angle(rng);
  const auto psi = run_ry_ansatz(ansatz, 0);
  const double exact = expectation_exact(psi, aux.pauli);

  const double shots[] = {1e4, 1e5, 1e6};
  std::vector<double> log_n, log_rms;
  std::string detail;
  for (double s : shots) {
    double sq = 0.0;
    for (int seed = 0; seed < kSlopeSeeds; ++seed) {
      const ShotBudget b{static_cast<std::uint64_t>(s), ShotAllocation::per_group, 5000 + std::uint64_t(seed)};
      const double e = estimate_expectation_sampled(psi, aux.pauli, b) - exact;
      sq += e * e;
    }
    const double rms = std::sqrt(sq / kSlopeSeeds);
    log_n.push_back(std::log10(s));
    log_rms.push_back(std::log10(rms));
    detail += strf(" %.0e:%.3e", s, rms);
  }
  const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / 3;
  const double my = std::accumulate(log_rms.begin(), log_rms.end(), 0.0) / 3;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (log_n[i] - mx) * (log_rms[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  const double slope = sxy / sxx;
  report(std::abs(slope - kSlope) <= kSlopeTol, "shot-noise-scaling",
         strf("log-log slope %.3f (target %.2f +- %.2f), RMS over %d seeds:%s", slope, kSlope, kSlopeTol, kSlopeSeeds,
             detail.c_str()));
}

void balda_limits() {
  const double beta0 = balda_beta(0.0);
  const double beta_small = balda_beta(1e-6);
  double e0_worst = 0.0;
  for (double n = 0.0; n <= 2.0; n += 1.0 / 64) {
    const auto r = balda_hxc(n, 0.0);
    e0_worst = std::max({e0_worst, std::abs(r.e_hxc), std::abs(r.v_hxc)});
  }
  double fd_worst = 0.0;
  const double h = 1e-6;
  for (double u : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    for (int i = 1; i < 80; ++i) {
      const double n = i / 40.0;
      if (std::abs(n - 1.0) < 1e-3) continue;
      const double fd = (balda_hxc(n + h, u).e_hxc - balda_hxc(n - h, u).e_hxc) / (2 * h);
      fd_worst = std::max(fd_worst, std::abs(balda_hxc(n, u).v_hxc - fd));
    }
  }
  const bool pass = std::abs(beta0 - 2.0) < kBetaTol && std::abs(beta_small - 2.0) < 1e-5 && e0_worst == 0.0 &&
                    fd_worst < kVhxcTol;
  report(pass, "balda-limits",
         strf("beta(0)=%.12f, beta(1e-6)=%.9f, max |e_hxc|,|v_hxc| at u=0 %.1e, max |v_hxc - FD| %.2e (tol %.0e)", beta0,
             beta_small, e0_worst, fd_worst, kVhxcTol));
}

void mol_toy() {
  const auto b = load_bundle(std::string(QDFT_TEST_DATA) + "/toy2.qdft.json");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(b.h_core, b.overlap);
  const double analytic = 2.0 * ges.eigenvalues()(0) + b.e_nuc;
  const auto classical = classical_scf(b);
  QuantumOrbitalSolver q(QuantumSolverConfig{});
  const auto quantum = run_dft_scf(b, q);
  const double dq = std::abs(quantum.total_energy - classical.total_energy);
  const double da = std::abs(classical.total_energy - analytic);
  report(dq < kToyTol && da < 1e-12 && classical.iterations == 1, "mol-toy",
         strf("E0 classical %.12f, quantum %.12f, |dE0| %.2e (tol %.0e); 2 eps_1 + e_nuc %.12f, diff %.1e, %d iteration",
             classical.total_energy, quantum.total_energy, dq, kToyTol, analytic, da, classical.iterations));
}

void mol_h8_secondary() {
  for (const char* name : {"h8_0.75", "h8_1.00", "h8_1.50", "h8_2.00"}) {
    const auto b = load_bundle(std::string(QDFT_TEST_DATA) + "/" + name + ".qdft.json");
    ScfLimits limits;
    // The stretched chain oscillates at the default mixing.
    if (std::string(name) == "h8_2.00") {
      limits.mixing = 0.1;
      limits.max_iterations = 400;
    }
    const auto classical = classical_scf(b, limits);
    const double dref = std::abs(classical.total_energy - *b.reference.energy);
    std::string detail = strf("classical %.10f vs reference %.10f (|d| %.1e, tol %.0e)", classical.total_energy,
                             *b.reference.energy, dref, kH8ReferenceTol);
    for (int layers : {4, 6}) {
      QuantumSolverConfig qc;
      qc.layers = layers;
      QuantumOrbitalSolver q(qc);
      const auto t0 = std::chrono::steady_clock::now();
      const auto quantum = run_dft_scf(b, q, limits);
      const double dq = std::abs(quantum.total_energy - classical.total_energy);
      detail += strf("; N_L=%d |dE0| %.2e (tol %.0e) %s, %.0f s", layers, dq, kH8QuantumTol,
                    dq <= kH8QuantumTol ? "ok" : "over", seconds_since(t0));
    }
    info(std::string("h8-dft ") + name, detail);
  }
  info("xc-error-dominance", "not evaluated: bundles carry no FCI reference energies");
}

}  // namespace

int main(int argc, char** argv) {
  const bool secondary = !(argc > 1 && std::string(argv[1]) == "--primary-only");
  mapping_faithfulness();
  projector_expansion();
  balda_limits();
  ensemble_ordering();
  shot_noise_scaling();
  mol_toy();
  soft_noiseless();
  soft_sampled();
  if (secondary) mol_h8_secondary();
  std::printf("%s: %d primary criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
