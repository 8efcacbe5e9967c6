#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "qdft/experiment.hpp"

using namespace qdft;

namespace {

ExperimentConfig small_soft() {
  ExperimentConfig c;
  c.u_grid = {0.0, 4.0};
  return c;
}

std::string csv_of(const std::vector<ResultRecord>& r, ExperimentKind kind = ExperimentKind::soft_hubbard) {
  std::ostringstream out;
  write_results(out, r, OutputFormat::csv, kind);
  return out.str();
}

}  // namespace

TEST_CASE("Classical sweep records", "[experiment]") {
  const auto r = run_experiment(small_soft());
  REQUIRE(r.size() == 2);
  CHECK(r[0].sweep_value == 0.0);
  CHECK(r[1].sweep_value == 4.0);
  for (const auto& rec : r) {
    CHECK(rec.abs_error == 0.0);
    CHECK(rec.converged);
    CHECK(rec.occupations.size() == 8);
    CHECK(rec.orbital_energies.size() == 2);
  }
  CHECK(r[1].seed == r[0].seed + 1);
  CHECK(std::abs(r[1].e0 - -5.0677059803) < 1e-8);
}

TEST_CASE("CSV layout", "[experiment]") {
  auto c = small_soft();
  c.u_grid = {4.0};
  const auto csv = csv_of(run_experiment(c));
  std::istringstream in(csv);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "U_over_t,solver,shots,seed,E0,E0_classical,abs_error,iterations");
  CHECK(row.rfind("4,classical,", 0) == 0);
  CHECK(row.find("-5.0677059803") != std::string::npos);
  CHECK_FALSE(std::getline(in, extra));
}

TEST_CASE("Reruns are byte-identical and JSON round-trips", "[experiment]") {
  const auto a = run_experiment(small_soft());
  const auto b = run_experiment(small_soft());
  CHECK(csv_of(a) == csv_of(b));
  const auto doc = records_to_json(a, ExperimentKind::soft_hubbard);
  CHECK(records_from_json(doc) == a);
  CHECK(records_from_json(nlohmann::json::parse(doc.dump())) == a);
}

TEST_CASE("Timing column is opt-in", "[experiment]") {
  auto c = small_soft();
  c.u_grid = {0.0};
  c.timing = true;
  const auto r = run_experiment(c);
  REQUIRE(r[0].wall_time_s.has_value());
  CHECK(csv_of(r).rfind("U_over_t,solver,shots,seed,E0,E0_classical,abs_error,iterations,wall_time_s\n", 0) == 0);
}

TEST_CASE("Molecular sweep uses the bundle column", "[experiment]") {
  ExperimentConfig c;
  c.kind = ExperimentKind::mol_dft;
  c.bundles = {std::string(QDFT_TEST_DATA) + "/toy2.qdft.json"};
  const auto r = run_experiment(c);
  REQUIRE(r.size() == 1);
  CHECK(r[0].sweep == "toy2.qdft.json");
  CHECK(csv_of(r, ExperimentKind::mol_dft).rfind("bundle,solver,", 0) == 0);
  c.bundles = {"/nonexistent.qdft.json"};
  CHECK_THROWS(run_experiment(c));
}

TEST_CASE("Config parsing", "[experiment][config]") {
  const auto c = config_from_json(nlohmann::json::parse(R"({"solver":"quantum-exact","U_grid":[1,2],"seed":9})"));
  CHECK(c.solver == SolverKind::quantum_exact);
  CHECK(c.u_grid == std::vector<double>{1, 2});
  CHECK(c.seed == 9);
  CHECK(c.effective_optimizer() == OptimizerKind::lbfgs);
  CHECK(config_from_json(config_to_json(c)).u_grid == c.u_grid);

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"colour":"blue"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"seed":"nine"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"solver":"annealer"})")), ConfigError);
  CHECK_THROWS_AS(parse_solver("qpu"), ConfigError);

  ExperimentConfig sampled;
  sampled.solver = SolverKind::quantum_sampled;
  CHECK(sampled.effective_optimizer() == OptimizerKind::spsa);
  sampled.optimizer = OptimizerKind::lbfgs;
  CHECK_THROWS_AS(sampled.validate(), ConfigError);
  ExperimentConfig no_shots;
  no_shots.solver = SolverKind::quantum_sampled;
  no_shots.shots = 0;
  CHECK_THROWS_AS(no_shots.validate(), ConfigError);
}

TEST_CASE("Map check", "[experiment]") {
  const auto r = run_map_check(8, 50, 3);
  REQUIRE(r.size() == 50);
  for (const auto& rec : r) {
    CHECK(rec.pass);
    CHECK(rec.num_qubits == 3);
    CHECK(rec.max_error < 1e-10);
  }
  std::ostringstream out;
  write_map_check_csv(out, r);
  CHECK(out.str().rfind("trial,", 0) == 0);
}
