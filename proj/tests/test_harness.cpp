#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hdm/harness.hpp"

using namespace hdm;

namespace {

RunBudget small_budget(int reps, int B, std::uint64_t seed) {
  RunBudget budget;
  budget.reps = reps;
  budget.seed = seed;
  budget.test.tau = TauPolicy::fixed_value(0.8);
  budget.test.B = B;
  budget.test.seed = seed;
  return budget;
}

}  // namespace

TEST_CASE("single replicate yields a zero-or-one rate") {
  const ExperimentResult res =
      run_size(scenario_build("pois-sparse-p25-balanced"), small_budget(1, 60, 7));
  CHECK(res.replicates.size() == 1);
  CHECK((res.rejection_rate == 0.0 || res.rejection_rate == 1.0));
}

TEST_CASE("rejection rate is exactly the rejection count over R") {
  const ExperimentResult res =
      run_size(scenario_build("pois-sparse-p25-balanced"), small_budget(12, 80, 3));
  int count = 0;
  for (const ReplicateRecord& r : res.replicates) count += r.reject ? 1 : 0;
  CHECK(res.rejection_rate == static_cast<double>(count) / 12.0);
  CHECK(res.replicates.size() == 12);
}

TEST_CASE("results are bitwise identical across worker counts") {
  RunBudget serial = small_budget(6, 50, 11);
  serial.threads = 1;
  RunBudget parallel = small_budget(6, 50, 11);
  parallel.threads = 8;

  const Scenario sc = scenario_build("fda-M2-specific-balanced");
  const ExperimentResult a = run_size(sc, serial);
  const ExperimentResult b = run_size(sc, parallel);
  CHECK(a.rejection_rate == b.rejection_rate);
  REQUIRE(a.replicates.size() == b.replicates.size());
  for (std::size_t i = 0; i < a.replicates.size(); ++i) {
    CHECK(a.replicates[i].reject == b.replicates[i].reject);
    CHECK(a.replicates[i].p_value == b.replicates[i].p_value);
    CHECK(a.replicates[i].tau == b.replicates[i].tau);
  }
}

TEST_CASE("power at theta = 0 reproduces the size run") {
  const Scenario sc = scenario_build("pois-dense-p25-balanced");
  const RunBudget budget = small_budget(8, 60, 21);
  const ExperimentResult size = run_size(sc, budget);
  const ExperimentResult power = run_power(sc, {0.0, 1.0}, budget);
  REQUIRE(power.power.size() == 2);
  CHECK(power.power[0].theta == 0.0);
  CHECK(power.power[0].rate == size.rejection_rate);
  CHECK(power.power[1].rate >= 0.0);
  // the base replicates are the theta = 0 cell
  REQUIRE(power.replicates.size() == size.replicates.size());
  for (std::size_t i = 0; i < size.replicates.size(); ++i)
    CHECK(power.replicates[i].p_value == size.replicates[i].p_value);
}

TEST_CASE("power grid must contain zero and size runs need theta = 0") {
  const Scenario sc = scenario_build("pois-sparse-p25-balanced");
  CHECK_THROWS_AS(run_power(sc, {0.5, 1.0}, small_budget(2, 40, 1)), Error);

  Scenario shifted = sc;
  shifted.theta = 0.3;
  CHECK_THROWS_AS(run_size(shifted, small_budget(2, 40, 1)), Error);

  CHECK_THROWS_AS(run_power(sc, {0.0, 1.5}, small_budget(2, 40, 1)), Error);
  CHECK_THROWS_AS(run_cell(PreparedScenario(sc), -0.1, small_budget(2, 40, 1)), Error);
}

TEST_CASE("zero-replicate budgets are rejected") {
  CHECK_THROWS_WITH_AS(run_size(scenario_build("pois-sparse-p25-balanced"), small_budget(0, 40, 1)),
                       doctest::Contains("BadBudget"), Error);
  CHECK_THROWS_AS(reproduce_table("size-fda", small_budget(0, 40, 1)), Error);
}

TEST_CASE("reproduce_table emits one row per scenario cell") {
  const auto fda = reproduce_table("size-fda", small_budget(2, 30, 5));
  CHECK(fda.size() == 16);
  for (const TableRow& row : fda) {
    CHECK(row.scenario.rfind("fda-", 0) == 0);
    CHECK(row.reps == 2);
    CHECK(row.rate >= 0.0);
    CHECK(row.rate <= 1.0);
  }

  const auto pois = reproduce_table("size-pois", small_budget(2, 30, 5));
  CHECK(pois.size() == 8);
  CHECK_THROWS_AS(reproduce_table("size-nope", small_budget(2, 30, 5)), Error);
}

TEST_CASE("fda scenarios generate coefficient datasets of the right shape") {
  const PreparedScenario prepared(scenario_build("fda-M3-specific-unbalanced"));
  RngStream stream(9);
  const Dataset data = prepared.generate(0.5, stream);
  REQUIRE(data.group_count() == 3);
  CHECK(data.dim() == 51);
  CHECK(data.rows(0) == 30);
  CHECK(data.rows(1) == 50);
  CHECK(data.rows(2) == 70);
}

TEST_CASE("poisson scenarios generate integer-valued datasets") {
  const PreparedScenario prepared(scenario_build("pois-sparse-p100-balanced"));
  RngStream stream(13);
  const Dataset data = prepared.generate(0.0, stream);
  CHECK(data.dim() == 100);
  for (const MatrixXd& g : data.groups) {
    CHECK(g.rows() == 50);
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j) {
        CHECK(g(i, j) >= 0.0);
        CHECK(g(i, j) == std::floor(g(i, j)));
      }
  }
}
