#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hdm/fanova.hpp"
#include "hdm/stat_core.hpp"

using namespace hdm;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

CurveSet noisy_constant_curves(int groups, int n, int m, double shift_last_group,
                               double noise_sd, std::uint64_t key) {
  RngStream stream(key);
  CurveSet curves;
  curves.grid = VectorXd::LinSpaced(m, 0.0, 1.0);
  for (int k = 0; k < groups; ++k) {
    MatrixXd g(n, m);
    const double level = 1.0 + (k == groups - 1 ? shift_last_group : 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = level + noise_sd * stream.normal();
    curves.groups.push_back(std::move(g));
  }
  return curves;
}

}  // namespace

TEST_CASE("basis_eval raw values") {
  const BasisSpec raw{BasisFamily::fourier_raw, 5};
  CHECK(basis_eval(raw, 0.3)[0] == 1.0);
  CHECK(basis_eval(raw, 0.25)[1] == doctest::Approx(1.0).epsilon(1e-12));   // sin(pi/2)
  CHECK(basis_eval(raw, 0.5)[2] == doctest::Approx(-1.0).epsilon(1e-12));   // cos(pi)
  CHECK(basis_eval(raw, 0.25)[3] == doctest::Approx(0.0).epsilon(1e-12));   // sin(pi)
}

TEST_CASE("orthonormal basis has unit numerical norm") {
  const BasisSpec ortho{BasisFamily::fourier_orthonormal, 5};
  const BasisSpec raw{BasisFamily::fourier_raw, 5};
  const VectorXd grid = VectorXd::LinSpaced(1000, 0.0, 1.0);
  VectorXd weights = VectorXd::Zero(grid.size());
  for (Index i = 0; i + 1 < grid.size(); ++i) {
    weights[i] += 0.5 * (grid[i + 1] - grid[i]);
    weights[i + 1] += 0.5 * (grid[i + 1] - grid[i]);
  }
  const MatrixXd phi_o = basis_matrix(ortho, grid);
  const MatrixXd phi_r = basis_matrix(raw, grid);
  CHECK(phi_o.col(1).cwiseAbs2().dot(weights) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(phi_r.col(1).cwiseAbs2().dot(weights) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("projection of a constant curve isolates the constant coefficient") {
  CurveSet curves;
  curves.grid = VectorXd::LinSpaced(100, 0.0, 1.0);
  curves.groups = {MatrixXd::Ones(2, 100)};
  const Dataset coeffs = project_curves(curves, {BasisFamily::fourier_raw, 51});
  REQUIRE(coeffs.groups.size() == 1);
  CHECK(coeffs.groups[0](0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  for (Index j = 1; j < 51; ++j) CHECK(std::abs(coeffs.groups[0](0, j)) <= 1e-10);
}

TEST_CASE("projection of sin(2 pi t) recovers its squared norm") {
  CurveSet curves;
  curves.grid = VectorXd::LinSpaced(100, 0.0, 1.0);
  MatrixXd g(1, 100);
  for (Index i = 0; i < 100; ++i) g(0, i) = std::sin(2.0 * kPi * curves.grid[i]);
  curves.groups = {g};
  const Dataset coeffs = project_curves(curves, {BasisFamily::fourier_raw, 51});
  CHECK(coeffs.groups[0](0, 1) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("projection of the zero curve is zero") {
  CurveSet curves;
  curves.grid = VectorXd::LinSpaced(60, 0.0, 1.0);
  curves.groups = {MatrixXd::Zero(3, 60)};
  const Dataset coeffs = project_curves(curves, {BasisFamily::fourier_raw, 11});
  CHECK(coeffs.groups[0].isZero(0.0));
}

TEST_CASE("projection is linear") {
  RngStream stream(74);
  CurveSet y1, y2, mix;
  y1.grid = y2.grid = mix.grid = VectorXd::LinSpaced(80, 0.0, 1.0);
  MatrixXd a(4, 80), b(4, 80);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 80; ++j) {
      a(i, j) = stream.normal();
      b(i, j) = stream.normal();
    }
  y1.groups = {a};
  y2.groups = {b};
  mix.groups = {1.3 * a - 0.7 * b};

  const BasisSpec spec{BasisFamily::fourier_raw, 9};
  const MatrixXd u1 = project_curves(y1, spec).groups[0];
  const MatrixXd u2 = project_curves(y2, spec).groups[0];
  const MatrixXd um = project_curves(mix, spec).groups[0];
  const MatrixXd want = 1.3 * u1 - 0.7 * u2;
  CHECK((um - want).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + want.cwiseAbs().maxCoeff()));
}

TEST_CASE("band-limited curves survive projection plus synthesis") {
  const BasisSpec spec{BasisFamily::fourier_orthonormal, 7};
  const VectorXd grid = VectorXd::LinSpaced(200, 0.0, 1.0);
  RngStream stream(8);
  VectorXd u(7);
  for (Index j = 0; j < 7; ++j) u[j] = stream.normal();

  CurveSet curves;
  curves.grid = grid;
  curves.groups = {basis_synthesize(spec, grid, u).transpose()};
  const Dataset coeffs = project_curves(curves, spec);
  CHECK((coeffs.groups[0].row(0).transpose() - u).cwiseAbs().maxCoeff() <= 1e-3);

  const VectorXd rebuilt = basis_synthesize(spec, grid, coeffs.groups[0].row(0).transpose());
  CHECK((rebuilt.transpose() - curves.groups[0].row(0)).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("coarse grids are rejected") {
  CurveSet curves;
  curves.grid = VectorXd::LinSpaced(30, 0.0, 1.0);
  curves.groups = {MatrixXd::Zero(2, 30)};
  CHECK_THROWS_WITH_AS(project_curves(curves, {BasisFamily::fourier_raw, 51}),
                       doctest::Contains("GridTooCoarse"), Error);
}

TEST_CASE("curve-set validation") {
  CurveSet bad;
  bad.grid = VectorXd::Zero(3);  // not increasing
  bad.groups = {MatrixXd::Zero(2, 3)};
  CHECK_THROWS_AS(project_curves(bad, {BasisFamily::fourier_raw, 3}), Error);

  CurveSet mismatch;
  mismatch.grid = VectorXd::LinSpaced(10, 0.0, 1.0);
  mismatch.groups = {MatrixXd::Zero(2, 9)};
  CHECK_THROWS_WITH_AS(project_curves(mismatch, {BasisFamily::fourier_raw, 3}),
                       doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("projection handles grids on arbitrary intervals") {
  // Same curve shape on [10, 50] as on [0, 1]: coefficients agree after the
  // affine rescale.
  const Index m = 120;
  const VectorXd unit = VectorXd::LinSpaced(m, 0.0, 1.0);
  const VectorXd days = VectorXd::LinSpaced(m, 10.0, 50.0);
  MatrixXd y(1, m);
  for (Index i = 0; i < m; ++i) y(0, i) = std::cos(2.0 * kPi * unit[i]) + 2.0;

  CurveSet a, b;
  a.grid = unit;
  a.groups = {y};
  b.grid = days;
  b.groups = {y};
  const BasisSpec spec{BasisFamily::fourier_raw, 7};
  const MatrixXd ua = project_curves(a, spec).groups[0];
  const MatrixXd ub = project_curves(b, spec).groups[0];
  CHECK((ua - ub).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fanova_test rejects a clear mean shift") {
  const CurveSet curves = noisy_constant_curves(2, 12, 40, 0.5, 0.05, 99);
  TestConfig cfg;
  cfg.tau = TauPolicy::fixed_value(0.5);
  cfg.B = 300;
  cfg.seed = 1;
  const FanovaResult result = fanova_test(curves, {BasisFamily::fourier_raw, 5}, cfg);
  CHECK(result.test.reject);
  CHECK(result.test.p_value <= 0.01);
  CHECK(result.basis.p == 5);
}

TEST_CASE("fanova_test holds its size under the null" * doctest::timeout(300)) {
  int rejections = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    const CurveSet curves =
        noisy_constant_curves(2, 15, 40, 0.0, 0.1, 5000 + static_cast<std::uint64_t>(rep));
    TestConfig cfg;
    cfg.tau = TauPolicy::fixed_value(0.5);
    cfg.B = 200;
    cfg.seed = 9000 + static_cast<std::uint64_t>(rep);
    if (fanova_test(curves, {BasisFamily::fourier_raw, 5}, cfg).test.reject) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  CHECK(rate >= 0.005);
  CHECK(rate <= 0.12);
}

TEST_CASE("projected coefficient variances decay") {
  const Index m = 60;
  const VectorXd grid = VectorXd::LinSpaced(m, 0.0, 1.0);
  // Brownian-like smooth paths: cumulative sums of noise have decaying
  // coefficient variances.
  RngStream stream(31);
  MatrixXd paths(80, m);
  for (Index i = 0; i < 80; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < m; ++j) {
      acc += stream.normal() / std::sqrt(static_cast<double>(m));
      paths(i, j) = acc;
    }
  }
  CurveSet curves;
  curves.grid = grid;
  curves.groups = {paths};
  const Dataset coeffs = project_curves(curves, {BasisFamily::fourier_raw, 21});
  const auto alphas = decay_diagnostic(group_summaries(coeffs));
  CHECK(alphas[0] > 0.0);
}
