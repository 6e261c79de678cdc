#include "hdm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hdm/fanova.hpp"
#include "hdm/parallel.hpp"
#include "hdm/stat_core.hpp"

namespace hdm {

ExperimentResult run_cell(const PreparedScenario& prepared, double theta,
                          const RunBudget& budget) {
  if (budget.reps < 1) fail(errc::bad_budget, "replicate count must be at least 1");
  if (theta < 0.0 || theta > 1.0) fail(errc::bad_config, "theta must lie in [0, 1]");
  ExperimentResult result;
  result.scenario = prepared.spec().name;
  result.replicates.resize(static_cast<std::size_t>(budget.reps));

  const auto start = std::chrono::steady_clock::now();
  parallel_for(static_cast<std::size_t>(budget.reps), budget.threads, [&](std::size_t rep) {
    RngStream stream = RngStream::from_path({budget.seed, stream_tag::sim_data, rep});
    const Dataset data = prepared.generate(theta, stream);
    TestConfig cfg = budget.test;
    cfg.threads = 1;
    cfg.seed = fold_key(fold_key(budget.seed, stream_tag::sim_test), rep);
    const TestResult test = run_test(data, cfg);
    result.replicates[rep] = {static_cast<int>(rep), test.reject, test.p_value, test.tau_used};
  });
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  result.seconds_per_rep = elapsed.count() / budget.reps;

  int rejections = 0;
  double tau_sum = 0.0;
  for (const ReplicateRecord& r : result.replicates) {
    rejections += r.reject ? 1 : 0;
    tau_sum += r.tau;
  }
  const double reps = budget.reps;
  result.rejection_rate = rejections / reps;
  result.mc_se = std::sqrt(result.rejection_rate * (1.0 - result.rejection_rate) / reps);
  result.tau_mean = tau_sum / reps;
  double tau_dev = 0.0;
  for (const ReplicateRecord& r : result.replicates)
    tau_dev += (r.tau - result.tau_mean) * (r.tau - result.tau_mean);
  result.tau_sd = std::sqrt(tau_dev / reps);
  return result;
}

PreparedScenario::PreparedScenario(Scenario scenario) : scenario_(std::move(scenario)) {
  if (scenario_.n.empty()) fail(errc::bad_config, "scenario has no sample sizes");
  if (scenario_.kind == ScenarioKind::fda) {
    if (scenario_.kernels.size() != scenario_.n.size())
      fail(errc::bad_config, "scenario needs one covariance kernel per group");
    grid_ = VectorXd::LinSpaced(scenario_.m, 0.0, 1.0);
    factors_.resize(scenario_.kernels.size());
    for (std::size_t k = 0; k < scenario_.kernels.size(); ++k) {
      if (scenario_.kernels[k].kind != CovKernel::Kind::series51)
        factors_[k] = psd_factor(gram_matrix(scenario_.kernels[k], grid_));
    }
    BasisSpec spec{BasisFamily::fourier_raw, scenario_.basis_p};
    VectorXd weights = VectorXd::Zero(grid_.size());
    for (Index i = 0; i + 1 < grid_.size(); ++i) {
      const double h = 0.5 * (grid_[i + 1] - grid_[i]);
      weights[i] += h;
      weights[i + 1] += h;
    }
    quad_ = weights.asDiagonal() * basis_matrix(spec, grid_);
  }
}

Dataset PreparedScenario::generate(double theta, RngStream& stream) const {
  Dataset out;
  out.groups.reserve(scenario_.n.size());
  if (scenario_.kind == ScenarioKind::fda) {
    for (std::size_t k = 0; k < scenario_.n.size(); ++k) {
      const int n_k = scenario_.n[k];
      VectorXd mean(grid_.size());
      const MeanFamily family{scenario_.mean_family, theta, static_cast<int>(k) + 1};
      for (Index i = 0; i < grid_.size(); ++i) mean[i] = mean_eval(family, grid_[i]);

      MatrixXd curves(n_k, grid_.size());
      for (int i = 0; i < n_k; ++i) {
        const VectorXd path = scenario_.kernels[k].kind == CovKernel::Kind::series51
                                  ? series_process_sample(grid_, stream)
                                  : gaussian_draw(factors_[k], stream);
        curves.row(i) = (mean + path).transpose();
      }
      out.groups.push_back(curves * quad_);
    }
    return out;
  }

  PoissonSpec spec;
  spec.pattern = scenario_.pattern;
  spec.theta = theta;
  spec.p = scenario_.poisson_p;
  for (std::size_t k = 0; k < scenario_.n.size(); ++k) {
    const VectorXd rates = poisson_rates(spec, static_cast<int>(k) + 1);
    MatrixXd counts(scenario_.n[k], spec.p);
    for (Index i = 0; i < counts.rows(); ++i)
      counts.row(i) = mv_poisson_sample(spec.eta0, rates, stream).cast<double>().transpose();
    out.groups.push_back(std::move(counts));
  }
  return out;
}

ExperimentResult run_size(const Scenario& scenario, const RunBudget& budget) {
  if (scenario.theta != 0.0) fail(errc::bad_config, "size runs require theta = 0");
  return run_cell(PreparedScenario(scenario), 0.0, budget);
}

ExperimentResult run_power(const Scenario& scenario, const std::vector<double>& theta_grid,
                           const RunBudget& budget) {
  if (theta_grid.empty() || std::find(theta_grid.begin(), theta_grid.end(), 0.0) == theta_grid.end())
    fail(errc::bad_config, "theta grid must contain 0");
  const PreparedScenario prepared(scenario);
  ExperimentResult combined;
  combined.scenario = scenario.name;
  std::vector<PowerPoint> curve;
  bool have_base = false;
  for (double theta : theta_grid) {
    ExperimentResult at = run_cell(prepared, theta, budget);
    curve.push_back({theta, at.rejection_rate, at.mc_se});
    if (theta == 0.0 && !have_base) {
      combined = std::move(at);
      have_base = true;
    }
  }
  combined.power = std::move(curve);
  return combined;
}

std::vector<TableRow> reproduce_table(const std::string& table, const RunBudget& budget) {
  if (budget.reps < 1) fail(errc::bad_budget, "replicate count must be at least 1");
  std::string prefix;
  if (table == "size-fda") prefix = "fda-";
  else if (table == "size-pois") prefix = "pois-";
  else fail(errc::bad_config, "unknown table " + table);

  std::vector<TableRow> rows;
  for (const std::string& name : scenario_catalog()) {
    if (name.rfind(prefix, 0) != 0) continue;
    const ExperimentResult res = run_size(scenario_build(name), budget);
    rows.push_back({name, res.rejection_rate, res.mc_se, res.tau_mean, budget.reps});
  }
  return rows;
}

}  // namespace hdm
