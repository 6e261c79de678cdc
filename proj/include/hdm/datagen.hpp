#ifndef HDM_DATAGEN_HPP_
#define HDM_DATAGEN_HPP_

#include <string>
#include <vector>

#include "hdm/rng.hpp"
#include "hdm/types.hpp"

namespace hdm {

// Matern covariance with the 1/16 variance scaling used throughout the
// simulation designs; marginal variance is variance/16. Smoothness is
// restricted to half-integers (1/2, 3/2, ...), where the Bessel factor has a
// closed form.
double matern_cov(double s, double t, double variance, double range, double smoothness);

// dispersion^2 * min(s, t).
double wiener_cov(double s, double t, double dispersion);

struct CovKernel {
  enum class Kind { matern, wiener, series51 };
  Kind kind = Kind::matern;
  double variance = 2.5;    // matern sigma^2
  double range = 1.0;       // matern eta
  double smoothness = 0.5;  // matern nu
  double dispersion = 0.1;  // wiener sigma

  static CovKernel matern(double variance, double range, double smoothness) {
    CovKernel k;
    k.kind = Kind::matern;
    k.variance = variance;
    k.range = range;
    k.smoothness = smoothness;
    return k;
  }
  static CovKernel wiener(double dispersion) {
    CovKernel k;
    k.kind = Kind::wiener;
    k.dispersion = dispersion;
    return k;
  }
  static CovKernel series51() {
    CovKernel k;
    k.kind = Kind::series51;
    return k;
  }
};

double kernel_eval(const CovKernel& kernel, double s, double t);

MatrixXd gram_matrix(const CovKernel& kernel, Eigen::Ref<const VectorXd> grid);

// One centered path on the grid. Gaussian kernels go through
// psd_factor + gaussian_draw of the Gram matrix; series51 draws the uniform
// coefficient series.
VectorXd gp_sample(Eigen::Ref<const VectorXd> grid, const CovKernel& kernel, RngStream& stream);

// Coefficients xi_j ~ U[-sqrt(3) j^-2, sqrt(3) j^-2], j = 1..51.
VectorXd series_coefficients(RngStream& stream);

// Sum_j xi_j phi_j / 20 on the grid (raw Fourier basis); enforces the
// triangle-inequality path bound.
VectorXd series_synthesize(Eigen::Ref<const VectorXd> grid, Eigen::Ref<const VectorXd> xi);

VectorXd series_process_sample(Eigen::Ref<const VectorXd> grid, RngStream& stream);

enum class MeanFamilyId { M1, M2, M3, M4 };

const char* mean_family_name(MeanFamilyId id);

struct MeanFamily {
  MeanFamilyId id = MeanFamilyId::M1;
  double theta = 0.0;
  int k = 1;  // group index in 1..3
};

// mu_k(t) on [0,1]; identical across k when theta = 0.
double mean_eval(const MeanFamily& family, double t);

enum class PoissonPattern { sparse, dense };

struct PoissonSpec {
  PoissonPattern pattern = PoissonPattern::sparse;
  double theta = 0.0;
  int p = 25;
  double eta0 = 1.0;
};

// Rates eta_{k,1..p}: sparse (1 + theta k) / j, dense 1/j + theta k / 2.
VectorXd poisson_rates(const PoissonSpec& spec, int k);

// Correlated counts (W0 + W1, ..., W0 + Wp) from independent Poisson draws.
Eigen::VectorXi mv_poisson_sample(double eta0, Eigen::Ref<const VectorXd> rates,
                                  RngStream& stream);
Eigen::VectorXi mv_poisson_sample(const PoissonSpec& spec, int k, RngStream& stream);

enum class ScenarioKind { fda, poisson };

// A fully parameterized simulation recipe from the scenario catalog.
struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::fda;
  std::vector<int> n;  // group sample sizes
  double theta = 0.0;
  // fda
  MeanFamilyId mean_family = MeanFamilyId::M1;
  std::vector<CovKernel> kernels;  // one per group
  int m = 100;                     // grid points on [0,1], endpoints included
  int basis_p = 51;
  // poisson
  PoissonPattern pattern = PoissonPattern::sparse;
  int poisson_p = 25;
};

// Catalog names: fda-{M1..M4}-{common|specific}-{balanced|unbalanced} and
// pois-{sparse|dense}-p{25|100}-{balanced|unbalanced}.
Scenario scenario_build(const std::string& name);

std::vector<std::string> scenario_catalog();

}  // namespace hdm

#endif  // HDM_DATAGEN_HPP_
