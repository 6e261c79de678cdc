#include "hdm/fanova.hpp"

#include <cmath>
#include <string>

namespace hdm {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void validate_curves(const CurveSet& curves) {
  const Index m = curves.grid.size();
  if (m < 2) fail(errc::grid_too_coarse, "grid needs at least 2 points");
  for (Index i = 1; i < m; ++i)
    if (!(curves.grid[i] > curves.grid[i - 1]))
      fail(errc::bad_config, "grid must be strictly increasing");
  if (!curves.grid.allFinite()) fail(errc::non_finite_entry, "grid has a NaN or Inf entry");
  if (curves.groups.empty()) fail(errc::too_few_groups, "curve set has no groups");
  for (std::size_t k = 0; k < curves.groups.size(); ++k) {
    if (curves.groups[k].cols() != m)
      fail(errc::dimension_mismatch,
           "group " + std::to_string(k + 1) + " does not match the grid length");
    if (!curves.groups[k].allFinite())
      fail(errc::non_finite_entry, "group " + std::to_string(k + 1) + " has a NaN or Inf entry");
  }
}

}  // namespace

const char* basis_family_name(BasisFamily family) {
  return family == BasisFamily::fourier_raw ? "fourier_raw" : "fourier_orthonormal";
}

VectorXd basis_eval(const BasisSpec& spec, double t) {
  if (spec.p < 1) fail(errc::bad_config, "basis size p must be at least 1");
  const double amp = spec.family == BasisFamily::fourier_orthonormal ? std::sqrt(2.0) : 1.0;
  VectorXd phi(spec.p);
  phi[0] = 1.0;
  for (int i = 2; i <= spec.p; ++i) {
    const int freq = i / 2;
    const double arg = 2.0 * kPi * freq * t;
    phi[i - 1] = amp * (i % 2 == 0 ? std::sin(arg) : std::cos(arg));
  }
  return phi;
}

MatrixXd basis_matrix(const BasisSpec& spec, Eigen::Ref<const VectorXd> points) {
  MatrixXd phi(points.size(), spec.p);
  for (Index i = 0; i < points.size(); ++i) phi.row(i) = basis_eval(spec, points[i]).transpose();
  return phi;
}

VectorXd basis_synthesize(const BasisSpec& spec, Eigen::Ref<const VectorXd> points,
                          Eigen::Ref<const VectorXd> coefficients) {
  return basis_matrix(spec, points) * coefficients;
}

Dataset project_curves(const CurveSet& curves, const BasisSpec& spec) {
  validate_curves(curves);
  const Index m = curves.grid.size();
  // Aliasing guard: the grid has to resolve the highest sin/cos frequency.
  if (m < 2 * (spec.p / 2))
    fail(errc::grid_too_coarse, "grid of " + std::to_string(m) +
                                    " points cannot resolve p = " + std::to_string(spec.p) +
                                    " basis functions");

  const double a = curves.grid[0];
  const double b = curves.grid[m - 1];
  const VectorXd scaled = (curves.grid.array() - a) / (b - a);

  VectorXd weights = VectorXd::Zero(m);
  for (Index i = 0; i + 1 < m; ++i) {
    const double h = 0.5 * (scaled[i + 1] - scaled[i]);
    weights[i] += h;
    weights[i + 1] += h;
  }

  const MatrixXd quad = weights.asDiagonal() * basis_matrix(spec, scaled);
  Dataset out;
  out.groups.reserve(curves.groups.size());
  for (const MatrixXd& g : curves.groups) out.groups.push_back(g * quad);
  return out;
}

FanovaResult fanova_test(const CurveSet& curves, const BasisSpec& spec, const TestConfig& config) {
  FanovaResult result;
  result.basis = spec;
  result.test = run_test(project_curves(curves, spec), config);
  return result;
}

}  // namespace hdm
