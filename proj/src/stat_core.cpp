#include "hdm/stat_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hdm {

const char* errc_name(errc code) {
  switch (code) {
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::too_few_groups: return "TooFewGroups";
    case errc::too_few_observations: return "TooFewObservations";
    case errc::non_finite_entry: return "NonFiniteEntry";
    case errc::not_psd: return "NotPSD";
    case errc::degenerate_coordinate: return "DegenerateCoordinate";
    case errc::bad_quantile_level: return "BadQuantileLevel";
    case errc::grid_too_coarse: return "GridTooCoarse";
    case errc::unknown_scenario: return "UnknownScenario";
    case errc::unsupported_smoothness: return "UnsupportedSmoothness";
    case errc::bad_budget: return "BadBudget";
    case errc::bad_config: return "BadConfig";
    case errc::io_error: return "IoError";
  }
  return "Error";
}

PairSet PairSet::all_pairs(int k_groups) {
  PairSet set;
  for (int k = 1; k <= k_groups; ++k)
    for (int l = k + 1; l <= k_groups; ++l) set.pairs.push_back({k, l});
  return set;
}

void PairSet::validate(int k_groups) const {
  if (pairs.empty()) fail(errc::bad_config, "pair set is empty");
  for (const Pair& p : pairs) {
    if (p.k < 1 || p.l > k_groups || p.k >= p.l)
      fail(errc::bad_config, "pair (" + std::to_string(p.k) + "," + std::to_string(p.l) +
                                 ") is not an ordered pair within 1.." + std::to_string(k_groups));
    for (const Pair& q : pairs) {
      if (&p != &q && p == q) fail(errc::bad_config, "duplicate pair in pair set");
    }
  }
}

const Dataset& validate_dataset(const Dataset& data) {
  if (data.group_count() < 2) fail(errc::too_few_groups, "need at least 2 groups");
  const Index p = data.groups.front().cols();
  if (p < 1) fail(errc::dimension_mismatch, "dimension p must be at least 1");
  for (int k = 0; k < data.group_count(); ++k) {
    const MatrixXd& g = data.groups[static_cast<std::size_t>(k)];
    if (g.cols() != p)
      fail(errc::dimension_mismatch, "group " + std::to_string(k + 1) + " has " +
                                         std::to_string(g.cols()) + " columns, expected " +
                                         std::to_string(p));
    if (g.rows() < 2)
      fail(errc::too_few_observations, "group " + std::to_string(k + 1) + " has fewer than 2 rows");
    if (!g.allFinite())
      fail(errc::non_finite_entry, "group " + std::to_string(k + 1) + " has a NaN or Inf entry");
  }
  return data;
}

GroupSummary group_summary(Eigen::Ref<const MatrixXd> group) {
  const Index n = group.rows();
  const Index p = group.cols();
  GroupSummary s;
  s.n = n;
  s.mean = group.colwise().mean();
  const MatrixXd centered = group.rowwise() - s.mean.transpose();
  // rankUpdate keeps the result exactly symmetric.
  s.cov = MatrixXd::Zero(p, p);
  s.cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(),
                                                   1.0 / static_cast<double>(n));
  s.cov.triangularView<Eigen::StrictlyUpper>() = s.cov.transpose();
  return s;
}

std::vector<GroupSummary> group_summaries(const Dataset& data) {
  std::vector<GroupSummary> out;
  out.reserve(data.groups.size());
  for (const MatrixXd& g : data.groups) out.push_back(group_summary(g));
  return out;
}

PooledScale pooled_scale(const GroupSummary& sk, const GroupSummary& sl) {
  if (sk.mean.size() != sl.mean.size())
    fail(errc::dimension_mismatch, "group summaries have different dimensions");
  const double nk = static_cast<double>(sk.n);
  const double nl = static_cast<double>(sl.n);
  PooledScale ps;
  ps.weight_k = nl / (nk + nl);
  ps.weight_l = nk / (nk + nl);
  ps.harmonic_n = nk * nl / (nk + nl);
  ps.sigma = (ps.weight_k * sk.cov.diagonal() + ps.weight_l * sl.cov.diagonal())
                 .cwiseMax(0.0)
                 .cwiseSqrt();
  return ps;
}

MatrixXd psd_factor(Eigen::Ref<const MatrixXd> cov) {
  const Index p = cov.rows();
  if (cov.cols() != p) fail(errc::dimension_mismatch, "covariance must be square");
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) fail(errc::not_psd, "eigendecomposition failed");
  const double scale = cov.cwiseAbs().maxCoeff();
  VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -1e-6 * scale)
    fail(errc::not_psd, "matrix has eigenvalue " + std::to_string(lambda.minCoeff()));
  // Clip small/negative eigenvalues at the rank tolerance so numerically
  // rank-deficient inputs produce exactly rank-deficient factors.
  const double rank_tol = 1e-12 * std::max(scale, 0.0);
  for (Index j = 0; j < p; ++j) lambda[j] = lambda[j] > rank_tol ? lambda[j] : 0.0;
  return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
}

VectorXd gaussian_draw(Eigen::Ref<const MatrixXd> factor, RngStream& stream) {
  VectorXd z(factor.cols());
  for (Index j = 0; j < z.size(); ++j) z[j] = stream.normal();
  return factor * z;
}

std::vector<double> decay_diagnostic(const std::vector<GroupSummary>& summaries) {
  std::vector<double> out;
  out.reserve(summaries.size());
  for (const GroupSummary& s : summaries) {
    std::vector<double> sd;
    sd.reserve(static_cast<std::size_t>(s.cov.rows()));
    for (Index j = 0; j < s.cov.rows(); ++j) {
      const double v = s.cov(j, j);
      if (v > 0.0) sd.push_back(std::sqrt(v));
    }
    std::sort(sd.begin(), sd.end(), std::greater<>());
    if (sd.size() < 2) {
      out.push_back(0.0);
      continue;
    }
    // Slope of log sd_(j) on log j; alpha is its negative.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(sd.size());
    for (std::size_t j = 0; j < sd.size(); ++j) {
      const double x = std::log(static_cast<double>(j + 1));
      const double y = std::log(sd[j]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.push_back(-slope);
  }
  return out;
}

}  // namespace hdm
