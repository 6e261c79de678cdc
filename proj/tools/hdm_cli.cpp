#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hdm/io.hpp"
#include "hdm/parallel.hpp"

namespace {

using namespace hdm;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::degenerate_coordinate:
    case errc::not_psd:
      return 3;
    default:
      return 2;
  }
}

PairSet parse_pairs(const std::string& text) {
  PairSet set;
  if (text == "all") return set;  // empty means all pairs, resolved per dataset
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos)
      fail(errc::bad_config, "--pairs item '" + item + "' is not of the form k-l");
    try {
      set.pairs.push_back({std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1))});
    } catch (const std::exception&) {
      fail(errc::bad_config, "--pairs item '" + item + "' is not of the form k-l");
    }
    start = comma + 1;
  }
  if (set.pairs.empty()) fail(errc::bad_config, "--pairs is empty");
  return set;
}

Side parse_side(const std::string& text) {
  if (text == "two-sided" || text == "two_sided") return Side::two_sided;
  if (text == "upper") return Side::upper;
  if (text == "lower") return Side::lower;
  fail(errc::bad_config, "--side must be two-sided, upper, or lower");
}

TauPolicy parse_tau(const std::string& text, const std::vector<double>& grid, int resamples) {
  if (text == "auto")
    return TauPolicy::auto_select(grid.empty() ? TauPolicy::default_tau_grid() : grid, resamples);
  try {
    return TauPolicy::fixed_value(std::stod(text));
  } catch (const std::exception&) {
    fail(errc::bad_config, "--tau must be a number in [0,1) or 'auto'");
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fputc('\n', stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write " + out_path);
  out << text << '\n';
}

struct CommonOptions {
  double rho = 0.05;
  std::string tau = "auto";
  std::vector<double> tau_grid;
  int size_resamples = 100;
  int B = 1000;
  std::uint64_t seed = 0;
  std::string pairs = "all";
  std::string side = "two-sided";
  std::string out_path;
  int threads = 0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--rho", rho, "Nominal level in (0,1)")->capture_default_str();
    cmd.add_option("--tau", tau, "Partial standardization exponent in [0,1), or 'auto'")
        ->capture_default_str();
    cmd.add_option("--tau-grid", tau_grid,
                   "Candidate tau values for --tau auto (default 0,0.1,...,0.9,0.99)")
        ->delimiter(',');
    cmd.add_option("--size-resamples", size_resamples,
                   "Resamples per candidate for the tau-selection size estimate")
        ->capture_default_str();
    cmd.add_option("--B", B, "Bootstrap replicates")->capture_default_str();
    cmd.add_option("--seed", seed, "Seed for all randomness")->capture_default_str();
    cmd.add_option("--pairs", pairs, "'all' or comma-separated k-l pairs, e.g. 1-2,3-4")
        ->capture_default_str();
    cmd.add_option("--side", side, "two-sided, upper, or lower")->capture_default_str();
    cmd.add_option("-o,--out", out_path, "Write the JSON result here instead of stdout");
    cmd.add_option("--threads", threads, "Worker cap (default: HDM_THREADS or hardware)");
  }

  TestConfig config() const {
    TestConfig cfg;
    cfg.rho = rho;
    cfg.tau = parse_tau(tau, tau_grid, size_resamples);
    cfg.B = B;
    cfg.side = parse_side(side);
    cfg.seed = seed;
    cfg.pairs = parse_pairs(pairs);
    cfg.threads = resolve_threads(threads);
    return cfg;
  }
};

int cmd_test(const std::string& input, const CommonOptions& opts) {
  const LabeledDataset loaded = read_dataset_csv_file(input);
  TestConfig cfg = opts.config();
  const PairSet pairs =
      cfg.pairs.pairs.empty() ? PairSet::all_pairs(loaded.data.group_count()) : cfg.pairs;
  const TestResult result = run_test(loaded.data, cfg);
  emit(test_result_json(result, cfg, loaded.labels, pairs, std::nullopt).dump(), opts.out_path);
  return 0;
}

int cmd_fanova(const std::string& input, const std::string& grid_path, const std::string& basis,
               int p, const CommonOptions& opts) {
  std::optional<VectorXd> grid;
  if (!grid_path.empty()) grid = read_grid_file(grid_path);
  const LabeledCurves loaded = read_curves_csv_file(input, grid);

  BasisSpec spec;
  spec.p = p;
  if (basis == "raw") spec.family = BasisFamily::fourier_raw;
  else if (basis == "orthonormal") spec.family = BasisFamily::fourier_orthonormal;
  else fail(errc::bad_config, "--basis must be raw or orthonormal");

  TestConfig cfg = opts.config();
  const PairSet pairs = cfg.pairs.pairs.empty()
                            ? PairSet::all_pairs(static_cast<int>(loaded.curves.groups.size()))
                            : cfg.pairs;
  const FanovaResult result = fanova_test(loaded.curves, spec, cfg);
  emit(test_result_json(result.test, cfg, loaded.labels, pairs, spec).dump(), opts.out_path);
  return 0;
}

int cmd_simulate(const std::string& scenario_name, const std::string& table, int reps,
                 double theta, const std::vector<double>& theta_grid, const std::string& log_path,
                 const CommonOptions& opts) {
  RunBudget budget;
  budget.reps = reps;
  budget.seed = opts.seed;
  budget.test = opts.config();
  budget.threads = budget.test.threads;

  if (!table.empty()) {
    const auto rows = reproduce_table(table, budget);
    for (const TableRow& row : rows)
      std::fprintf(stderr, "%-28s rate %.4f  se %.4f  tau_mean %.3f\n", row.scenario.c_str(),
                   row.rate, row.se, row.tau_mean);
    emit(table_json(table, rows, budget).dump(), opts.out_path);
    return 0;
  }

  const Scenario scenario = scenario_build(scenario_name);
  ExperimentResult result;
  if (!theta_grid.empty()) {
    result = run_power(scenario, theta_grid, budget);
  } else if (theta == 0.0) {
    result = run_size(scenario, budget);
  } else {
    result = run_cell(PreparedScenario(scenario), theta, budget);
    result.scenario = scenario.name;
  }

  if (!log_path.empty()) {
    std::ofstream log(log_path, std::ios::binary);
    if (!log) fail(errc::io_error, "cannot write " + log_path);
    log << replicate_log_lines(result.scenario, result.replicates);
  }
  std::fprintf(stderr, "%s: rejection_rate %.4f (se %.4f), tau_mean %.3f, %.3fs/rep\n",
               result.scenario.c_str(), result.rejection_rate, result.mc_se, result.tau_mean,
               result.seconds_per_rep);
  emit(experiment_json(result, budget, theta).dump(), opts.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional MANOVA via bootstrapped max statistics"};
  app.require_subcommand(1);

  CommonOptions test_opts, fanova_opts, sim_opts;
  std::string test_input, fanova_input, fanova_grid;
  std::string fanova_basis = "raw";
  int fanova_p = 51;
  std::string sim_scenario, sim_table, sim_log;
  int sim_reps = 500;
  double sim_theta = 0.0;
  std::vector<double> sim_theta_grid;

  CLI::App* test_cmd = app.add_subcommand(
      "test", "Test mean-vector equality from a CSV of observations (group column first)");
  test_cmd->add_option("-i,--input", test_input, "Input CSV")->required();
  test_opts.attach(*test_cmd);

  CLI::App* fanova_cmd = app.add_subcommand(
      "fanova", "Functional ANOVA: project curves onto a Fourier basis and test coefficients");
  fanova_cmd->add_option("-i,--input", fanova_input, "Curves CSV (group column, then grid values)")
      ->required();
  fanova_cmd->add_option("--grid", fanova_grid,
                         "Grid file (default: equally spaced on [0,1])");
  fanova_cmd->add_option("--basis", fanova_basis, "raw or orthonormal")->capture_default_str();
  fanova_cmd->add_option("-p,--p", fanova_p, "Number of basis functions")->capture_default_str();
  fanova_opts.attach(*fanova_cmd);

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo size/power experiments");
  sim_cmd->add_option("--scenario", sim_scenario, "Scenario name, e.g. fda-M1-common-balanced");
  sim_cmd->add_option("--table", sim_table, "Reproduce a size table: size-fda or size-pois");
  sim_cmd->add_option("--reps", sim_reps, "Replicates")->capture_default_str();
  sim_cmd->add_option("--theta", sim_theta, "Alternative strength in [0,1]")->capture_default_str();
  sim_cmd->add_option("--theta-grid", sim_theta_grid, "Power curve thetas (must contain 0)")
      ->delimiter(',');
  sim_cmd->add_option("--log", sim_log, "Write a JSON-lines replicate log here");
  sim_opts.tau = "0.8";  // desk-scale default for simulations; pass 'auto' to select
  sim_opts.attach(*sim_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (test_cmd->parsed()) return cmd_test(test_input, test_opts);
    if (fanova_cmd->parsed()) return cmd_fanova(fanova_input, fanova_grid, fanova_basis, fanova_p,
                                                fanova_opts);
    if (sim_cmd->parsed()) {
      if (sim_scenario.empty() == sim_table.empty())
        fail(errc::bad_config, "simulate needs exactly one of --scenario or --table");
      return cmd_simulate(sim_scenario, sim_table, sim_reps, sim_theta, sim_theta_grid, sim_log,
                          sim_opts);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
