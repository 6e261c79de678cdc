#ifndef HDM_TYPES_HPP_
#define HDM_TYPES_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace hdm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using Index = Eigen::Index;

enum class errc {
  dimension_mismatch,
  too_few_groups,
  too_few_observations,
  non_finite_entry,
  not_psd,
  degenerate_coordinate,
  bad_quantile_level,
  grid_too_coarse,
  unknown_scenario,
  unsupported_smoothness,
  bad_budget,
  bad_config,
  io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

// K groups of n_k x p observation matrices (rows = observations).
struct Dataset {
  std::vector<MatrixXd> groups;

  int group_count() const { return static_cast<int>(groups.size()); }
  Index dim() const { return groups.empty() ? 0 : groups.front().cols(); }
  Index rows(int k) const { return groups[static_cast<std::size_t>(k)].rows(); }
};

// Ordered group pair, 1-based, k < l.
struct Pair {
  int k = 0;
  int l = 0;

  friend bool operator==(const Pair&, const Pair&) = default;
};

// Nonempty set of distinct ordered pairs within 1..K.
struct PairSet {
  std::vector<Pair> pairs;

  static PairSet all_pairs(int k_groups);
  void validate(int k_groups) const;
  std::size_t size() const { return pairs.size(); }
};

// Sample mean and covariance (1/n divisor) of one group.
struct GroupSummary {
  VectorXd mean;
  MatrixXd cov;
  Index n = 0;
};

// Pooled partial-standardization scales of a group pair.
struct PooledScale {
  VectorXd sigma;       // sqrt of diag of the pooled covariance
  double weight_k = 0;  // n_l / (n_k + n_l), multiplies group k
  double weight_l = 0;  // n_k / (n_k + n_l), multiplies group l
  double harmonic_n = 0;
};

}  // namespace hdm

#endif  // HDM_TYPES_HPP_
