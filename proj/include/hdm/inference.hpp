#ifndef HDM_INFERENCE_HPP_
#define HDM_INFERENCE_HPP_

#include <cstdint>
#include <vector>

#include "hdm/bootstrap.hpp"
#include "hdm/types.hpp"

namespace hdm {

enum class Side { two_sided, upper, lower };

const char* side_name(Side side);

// Partial-standardization exponent policy: a fixed value, or data-driven
// selection over a candidate grid with `resamples` within-group resamples per
// candidate for the empirical-size estimate.
struct TauPolicy {
  bool automatic = false;
  double fixed = 0.8;
  std::vector<double> grid = default_tau_grid();
  int resamples = 100;

  static TauPolicy fixed_value(double tau) { return {false, tau, {}, 0}; }
  static TauPolicy auto_select(std::vector<double> grid = default_tau_grid(),
                               int resamples = 100) {
    return {true, 0.0, std::move(grid), resamples};
  }
  static std::vector<double> default_tau_grid();
};

struct TestConfig {
  double rho = 0.05;
  TauPolicy tau;
  int B = 1000;
  Side side = Side::two_sided;
  std::uint64_t seed = 0;
  PairSet pairs;  // empty means all K(K-1)/2 pairs
  int threads = 1;
};

struct ScrEntry {
  int k = 0;
  int l = 0;
  int j = 0;  // 1-based coordinate
  double lower = 0;
  double upper = 0;
  bool excludes_zero = false;
};

struct Triple {
  int k = 0;
  int l = 0;
  int j = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

struct TauDiagnostic {
  double tau = 0;
  double size = 0;
  double p_value = 0;
  bool retained = false;
};

struct TestResult {
  bool reject = false;
  double p_value = 1.0;
  double tau_used = 0;
  std::vector<ScrEntry> scr;
  std::vector<Triple> significant;
  std::vector<TauDiagnostic> tau_diagnostics;  // empty under a fixed policy
  bool tau_fallback = false;  // no candidate kept the estimated size at or below rho
};

// Simultaneous confidence regions at level 1 - rho. Two-sided entries follow
//   [diff - qM(1-rho/2) s, diff - qL(rho/2) s],  s = sigma^tau / sqrt(n_{ k,l}),
// one-sided entries use the single quantile at level rho and extend to the
// corresponding infinity.
std::vector<ScrEntry> build_scr(const Dataset& data, const BootstrapDistribution& dist,
                                const PairSet& pairs, double tau, double rho,
                                Side side = Side::two_sided);
std::vector<ScrEntry> build_scr(const std::vector<GroupSummary>& summaries,
                                const std::vector<PairContext>& contexts,
                                const BootstrapDistribution& dist, double rho, Side side);

// Rejects iff some entry excludes zero; returns those triples.
std::pair<bool, std::vector<Triple>> decide(const std::vector<ScrEntry>& scr, double rho);

// Largest rho at which every SCR still contains zero, located by bisection
// (the feasible set is a left interval since both quantile constraints are
// monotone in rho). 0 when infeasible at every level, 1 when always feasible.
double p_value(const ObservedPivot& pivot, const BootstrapDistribution& dist,
               Side side = Side::two_sided);

// Full procedure: resolve tau, bootstrap, SCRs at config.rho, decision,
// p-value.
TestResult run_test(const Dataset& data, const TestConfig& config);

struct TauSelection {
  double tau = 0;
  std::vector<TauDiagnostic> diagnostics;
  bool fallback = false;
};

// Data-driven tau: per candidate, the empirical size is the rejection
// fraction across tests on within-group-centered resamples; candidates whose
// size stays at or below rho are retained and the retained candidate with the
// smallest p-value on the original data wins (ties to the larger tau). When
// nothing is retained, falls back to the smallest-size candidate and flags it.
TauSelection select_tau(const Dataset& data, const TestConfig& config);

}  // namespace hdm

#endif  // HDM_INFERENCE_HPP_
