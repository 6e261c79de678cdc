#ifndef HDM_HARNESS_HPP_
#define HDM_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hdm/datagen.hpp"
#include "hdm/inference.hpp"

namespace hdm {

// Replicate count, seed, and test configuration for a Monte-Carlo experiment.
struct RunBudget {
  int reps = 500;
  std::uint64_t seed = 0;
  TestConfig test;
  int threads = 1;
};

struct ReplicateRecord {
  int rep = 0;
  bool reject = false;
  double p_value = 1.0;
  double tau = 0.0;
};

struct PowerPoint {
  double theta = 0.0;
  double rate = 0.0;
  double se = 0.0;
};

struct ExperimentResult {
  std::string scenario;
  double rejection_rate = 0.0;
  double mc_se = 0.0;
  double tau_mean = 0.0;
  double tau_sd = 0.0;
  double seconds_per_rep = 0.0;
  std::vector<ReplicateRecord> replicates;
  std::vector<PowerPoint> power;  // filled by run_power
};

// Scenario with its grid factors and projection matrix precomputed, so
// per-replicate work is generation + test only.
class PreparedScenario {
 public:
  explicit PreparedScenario(Scenario scenario);

  // One synthetic dataset; replicate streams must come from
  // (seed, sim_data, rep). FDA scenarios return the projected coefficient
  // vectors.
  Dataset generate(double theta, RngStream& stream) const;

  const Scenario& spec() const { return scenario_; }

 private:
  Scenario scenario_;
  VectorXd grid_;
  std::vector<MatrixXd> factors_;  // per group; empty for series51
  MatrixXd quad_;                  // m x p quadrature-times-basis matrix
};

// R independent replicates of generate -> test -> record at one value of
// theta. Deterministic under the seed for any worker count.
ExperimentResult run_cell(const PreparedScenario& prepared, double theta,
                          const RunBudget& budget);

// Empirical size: run_cell at theta = 0.
ExperimentResult run_size(const Scenario& scenario, const RunBudget& budget);

// Rejection rate per theta, with Monte-Carlo standard errors; the grid must
// contain 0. Replicate streams are keyed by replicate index only, so the
// theta = 0 entry reproduces run_size exactly.
ExperimentResult run_power(const Scenario& scenario, const std::vector<double>& theta_grid,
                           const RunBudget& budget);

struct TableRow {
  std::string scenario;
  double rate = 0.0;
  double se = 0.0;
  double tau_mean = 0.0;
  int reps = 0;
};

// The "proposed" column of the empirical-size tables: 16 FDA cells
// ("size-fda") or 8 Poisson cells ("size-pois").
std::vector<TableRow> reproduce_table(const std::string& table, const RunBudget& budget);

}  // namespace hdm

#endif  // HDM_HARNESS_HPP_
