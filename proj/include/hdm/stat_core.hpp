#ifndef HDM_STAT_CORE_HPP_
#define HDM_STAT_CORE_HPP_

#include <vector>

#include "hdm/rng.hpp"
#include "hdm/types.hpp"

namespace hdm {

// Checks the Dataset invariants (K >= 2, every n_k >= 2, common p >= 1, all
// entries finite) and returns the dataset unchanged. Idempotent.
const Dataset& validate_dataset(const Dataset& data);

// Column mean and sample covariance with divisor n (not n - 1).
GroupSummary group_summary(Eigen::Ref<const MatrixXd> group);

std::vector<GroupSummary> group_summaries(const Dataset& data);

// Convex combination Sigma_{k,l} = w_k Sigma_k + w_l Sigma_l with
// w_k = n_l/(n_k+n_l); sigma_j is the square root of its j-th diagonal entry,
// harmonic_n = n_k n_l/(n_k+n_l).
PooledScale pooled_scale(const GroupSummary& sk, const GroupSummary& sl);

// Factor F with F F^T ~= cov, via symmetric eigendecomposition. Eigenvalues
// below the rank tolerance are clipped to zero, so rank-deficient covariances
// (typical when p > n) factor cleanly and the image of F stays inside the
// numerical column space. Throws not_psd when an eigenvalue falls below
// -1e-6 * max|cov|.
MatrixXd psd_factor(Eigen::Ref<const MatrixXd> cov);

// F * z with z ~ N(0, I). Linear in z: scaling cov by c^2 scales matched-seed
// draws by c.
VectorXd gaussian_draw(Eigen::Ref<const MatrixXd> factor, RngStream& stream);

// Least-squares slope alpha of log sigma_(j) ~ -alpha log j over the ordered
// positive standard deviations of each group; zero coordinates are excluded.
// Descriptive only: reports how fast the coordinate scales decay.
std::vector<double> decay_diagnostic(const std::vector<GroupSummary>& summaries);

}  // namespace hdm

#endif  // HDM_STAT_CORE_HPP_
