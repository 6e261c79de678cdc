#ifndef HDM_BOOTSTRAP_HPP_
#define HDM_BOOTSTRAP_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "hdm/stat_core.hpp"
#include "hdm/types.hpp"

namespace hdm {

struct BootstrapConfig {
  double tau = 0.8;
  int B = 1000;
  std::uint64_t seed = 0;
  PairSet pairs;
  int threads = 1;
};

// Scales and weights of one pair, with sigma^tau precomputed. Building this
// is where a zero pooled scale with tau > 0 is rejected.
struct PairContext {
  Pair pair;
  PooledScale scale;
  VectorXd sigma_tau;  // sigma_j^tau, or all ones when tau == 0
};

std::vector<PairContext> make_pair_contexts(const std::vector<GroupSummary>& summaries,
                                            const PairSet& pairs, double tau);

// sqrt(n_{k,l}) (Xbar_k(j) - Xbar_l(j)) / sigma_{k,l,j}^tau for every pair and
// coordinate, plus its extremes.
struct ObservedPivot {
  double t_max = 0;
  double t_min = 0;
  std::vector<VectorXd> per_pair;  // aligned with the pair contexts
};

ObservedPivot observed_pivot(const Dataset& data, const PairSet& pairs, double tau);
ObservedPivot observed_pivot(const std::vector<GroupSummary>& summaries,
                             const std::vector<PairContext>& contexts);

// Max/min over pairs and coordinates of the weighted draw combination
// sqrt(w_k) S*_k(j)/sigma^tau - sqrt(w_l) S*_l(j)/sigma^tau. The draws are one
// vector per group, shared across all pairs, which preserves the cross-pair
// dependence of the max.
std::pair<double, double> pair_extremes(const std::vector<VectorXd>& draws,
                                        const std::vector<PairContext>& contexts);

// One bootstrap replicate: draw S*_k ~ N(0, Sigma_hat_k) per group from the
// given stream, then take the extremes.
std::pair<double, double> boot_replicate(const std::vector<MatrixXd>& factors,
                                         const std::vector<PairContext>& contexts,
                                         RngStream& stream);

// B sorted replicates of (M*, L*).
struct BootstrapDistribution {
  std::vector<double> m_star;
  std::vector<double> l_star;
};

// Replicate b draws from the substream (seed, bootstrap, b), so the result is
// identical for any degree of parallelism.
BootstrapDistribution run_bootstrap(const Dataset& data, const BootstrapConfig& config);
BootstrapDistribution run_bootstrap(const std::vector<GroupSummary>& summaries,
                                    const std::vector<PairContext>& contexts,
                                    const BootstrapConfig& config);

// The ceil(beta * B)-th order statistic (right-continuous inverse of the
// empirical CDF); beta must lie in (0, 1].
double empirical_quantile(const std::vector<double>& sorted_samples, double beta);

}  // namespace hdm

#endif  // HDM_BOOTSTRAP_HPP_
