#include "hdm/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hdm/parallel.hpp"

namespace hdm {

std::vector<PairContext> make_pair_contexts(const std::vector<GroupSummary>& summaries,
                                            const PairSet& pairs, double tau) {
  if (tau < 0.0 || tau >= 1.0) fail(errc::bad_config, "tau must lie in [0, 1)");
  pairs.validate(static_cast<int>(summaries.size()));
  std::vector<PairContext> out;
  out.reserve(pairs.size());
  for (const Pair& pr : pairs.pairs) {
    PairContext ctx;
    ctx.pair = pr;
    ctx.scale = pooled_scale(summaries[static_cast<std::size_t>(pr.k - 1)],
                             summaries[static_cast<std::size_t>(pr.l - 1)]);
    const Index p = ctx.scale.sigma.size();
    ctx.sigma_tau = VectorXd::Ones(p);
    if (tau > 0.0) {
      for (Index j = 0; j < p; ++j) {
        const double s = ctx.scale.sigma[j];
        if (s <= 0.0)
          fail(errc::degenerate_coordinate,
               "pooled scale is zero at coordinate " + std::to_string(j + 1) + " of pair (" +
                   std::to_string(pr.k) + "," + std::to_string(pr.l) + ") with tau > 0");
        ctx.sigma_tau[j] = std::pow(s, tau);
      }
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

ObservedPivot observed_pivot(const std::vector<GroupSummary>& summaries,
                             const std::vector<PairContext>& contexts) {
  ObservedPivot pivot;
  pivot.t_max = -std::numeric_limits<double>::infinity();
  pivot.t_min = std::numeric_limits<double>::infinity();
  pivot.per_pair.reserve(contexts.size());
  for (const PairContext& ctx : contexts) {
    const GroupSummary& sk = summaries[static_cast<std::size_t>(ctx.pair.k - 1)];
    const GroupSummary& sl = summaries[static_cast<std::size_t>(ctx.pair.l - 1)];
    VectorXd t = std::sqrt(ctx.scale.harmonic_n) *
                 (sk.mean - sl.mean).cwiseQuotient(ctx.sigma_tau);
    pivot.t_max = std::max(pivot.t_max, t.maxCoeff());
    pivot.t_min = std::min(pivot.t_min, t.minCoeff());
    pivot.per_pair.push_back(std::move(t));
  }
  return pivot;
}

ObservedPivot observed_pivot(const Dataset& data, const PairSet& pairs, double tau) {
  const auto summaries = group_summaries(validate_dataset(data));
  return observed_pivot(summaries, make_pair_contexts(summaries, pairs, tau));
}

std::pair<double, double> pair_extremes(const std::vector<VectorXd>& draws,
                                        const std::vector<PairContext>& contexts) {
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (const PairContext& ctx : contexts) {
    const VectorXd& sk = draws[static_cast<std::size_t>(ctx.pair.k - 1)];
    const VectorXd& sl = draws[static_cast<std::size_t>(ctx.pair.l - 1)];
    const double ak = std::sqrt(ctx.scale.weight_k);
    const double al = std::sqrt(ctx.scale.weight_l);
    for (Index j = 0; j < sk.size(); ++j) {
      const double v = (ak * sk[j] - al * sl[j]) / ctx.sigma_tau[j];
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
  }
  return {hi, lo};
}

std::pair<double, double> boot_replicate(const std::vector<MatrixXd>& factors,
                                         const std::vector<PairContext>& contexts,
                                         RngStream& stream) {
  std::vector<VectorXd> draws;
  draws.reserve(factors.size());
  for (const MatrixXd& f : factors) draws.push_back(gaussian_draw(f, stream));
  return pair_extremes(draws, contexts);
}

BootstrapDistribution run_bootstrap(const std::vector<GroupSummary>& summaries,
                                    const std::vector<PairContext>& contexts,
                                    const BootstrapConfig& config) {
  if (config.B < 1) fail(errc::bad_config, "B must be at least 1");
  std::vector<MatrixXd> factors;
  factors.reserve(summaries.size());
  for (const GroupSummary& s : summaries) factors.push_back(psd_factor(s.cov));

  BootstrapDistribution dist;
  const std::size_t b_count = static_cast<std::size_t>(config.B);
  dist.m_star.resize(b_count);
  dist.l_star.resize(b_count);
  parallel_for(b_count, config.threads, [&](std::size_t b) {
    RngStream stream = RngStream::from_path({config.seed, stream_tag::bootstrap, b});
    const auto [m, l] = boot_replicate(factors, contexts, stream);
    dist.m_star[b] = m;
    dist.l_star[b] = l;
  });
  std::sort(dist.m_star.begin(), dist.m_star.end());
  std::sort(dist.l_star.begin(), dist.l_star.end());
  return dist;
}

BootstrapDistribution run_bootstrap(const Dataset& data, const BootstrapConfig& config) {
  const auto summaries = group_summaries(validate_dataset(data));
  return run_bootstrap(summaries, make_pair_contexts(summaries, config.pairs, config.tau), config);
}

double empirical_quantile(const std::vector<double>& sorted_samples, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) fail(errc::bad_quantile_level, "beta must lie in (0, 1]");
  if (sorted_samples.empty()) fail(errc::bad_config, "empty sample");
  const double b = static_cast<double>(sorted_samples.size());
  auto rank = static_cast<std::size_t>(std::ceil(beta * b));
  rank = std::clamp<std::size_t>(rank, 1, sorted_samples.size());
  return sorted_samples[rank - 1];
}

}  // namespace hdm
