#ifndef HDM_FANOVA_HPP_
#define HDM_FANOVA_HPP_

#include <string>
#include <vector>

#include "hdm/inference.hpp"
#include "hdm/types.hpp"

namespace hdm {

// K groups of curves discretized on a shared strictly increasing grid
// (rows = curves).
struct CurveSet {
  VectorXd grid;
  std::vector<MatrixXd> groups;
};

enum class BasisFamily { fourier_raw, fourier_orthonormal };

struct BasisSpec {
  BasisFamily family = BasisFamily::fourier_raw;
  int p = 51;
};

const char* basis_family_name(BasisFamily family);

// phi_1 = 1, phi_{2j}(t) = sin(2 j pi t), phi_{2j+1}(t) = cos(2 j pi t) on
// [0,1]; the orthonormal family scales the sin/cos entries by sqrt(2).
VectorXd basis_eval(const BasisSpec& spec, double t);

// Rows are basis_eval at each grid point of `points` (already in [0,1]).
MatrixXd basis_matrix(const BasisSpec& spec, Eigen::Ref<const VectorXd> points);

// Sum_j u_j phi_j evaluated on the grid.
VectorXd basis_synthesize(const BasisSpec& spec, Eigen::Ref<const VectorXd> points,
                          Eigen::Ref<const VectorXd> coefficients);

// Generalized Fourier coefficients by trapezoidal quadrature of Y * phi_j over
// the grid, affinely rescaled to [0,1] first. The result feeds run_test
// directly. Throws grid_too_coarse when the grid cannot resolve the highest
// basis frequency.
Dataset project_curves(const CurveSet& curves, const BasisSpec& spec);

struct FanovaResult {
  TestResult test;
  BasisSpec basis;
};

// Projection followed by the vector test on the coefficients.
FanovaResult fanova_test(const CurveSet& curves, const BasisSpec& spec, const TestConfig& config);

}  // namespace hdm

#endif  // HDM_FANOVA_HPP_
