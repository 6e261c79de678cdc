#ifndef HDM_TESTS_ORACLES_HPP_
#define HDM_TESTS_ORACLES_HPP_

// Independent reference implementations used only to check the library.
// These deliberately avoid the code paths under test.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Textbook covariance: sum of outer products of centered rows over n.
inline Eigen::MatrixXd brute_force_cov(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  const auto p = x.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (Eigen::Index i = 0; i < n; ++i) mean += x.row(i).transpose();
  mean /= static_cast<double>(n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd d = x.row(i).transpose() - mean;
    cov += d * d.transpose();
  }
  return cov / static_cast<double>(n);
}

// Sort-plus-ceiling-index quantile.
inline double naive_quantile(std::vector<double> samples, double beta) {
  std::sort(samples.begin(), samples.end());
  auto rank = static_cast<std::size_t>(std::ceil(beta * static_cast<double>(samples.size())));
  if (rank < 1) rank = 1;
  if (rank > samples.size()) rank = samples.size();
  return samples[rank - 1];
}

// Exhaustive scan for the largest feasible level of the two-sided p-value.
inline double scan_p_value(double t_max, double t_min, const std::vector<double>& m_star,
                           const std::vector<double>& l_star, int levels = 100000) {
  double best = 0.0;
  for (int i = 1; i < levels; ++i) {
    const double rho = static_cast<double>(i) / levels;
    const bool ok = t_max <= naive_quantile(m_star, 1.0 - rho / 2.0) &&
                    t_min >= naive_quantile(l_star, rho / 2.0);
    if (ok) best = rho;
  }
  return best;
}

}  // namespace oracle

#endif  // HDM_TESTS_ORACLES_HPP_
