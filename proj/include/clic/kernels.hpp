#ifndef CLIC_KERNELS_HPP
#define CLIC_KERNELS_HPP

#include <vector>

#include "clic/rng.hpp"

namespace clic {

// Isotropic Gaussian location view: atoms are d-dimensional means drawn from
// N(base_mean, base_sd^2 I), one shared precision per view with a
// Gamma(prec_shape, prec_rate) prior on the precision.
struct GaussianViewSpec {
  int dim = 1;
  std::vector<double> base_mean{0.0};
  double base_sd = 1.0;
  double prec_shape = 1.0;
  double prec_rate = 1.0;

  void validate() const;
};

// Scalar regression view: the response is x2 ~ N(x1 * slope, 1/precision)
// where x1 comes from the covariate view (which must be one-dimensional).
// Atoms are slopes with a N(base_mean, base_sd^2) base measure; no intercept.
struct RegressionViewSpec {
  double base_mean = 0.0;
  double base_sd = 1.0;
  double prec_shape = 1.0;
  double prec_rate = 1.0;
  int covariate_view = 0;  // 0-based index of the view supplying x1

  void validate() const;
};

// Log density of an isotropic normal: mean = atom, per-coordinate variance
// 1/precision. x and atom both have length dim.
double loglik_gaussian(const double* x, const double* atom, int dim, double precision);

// Log density of x2 under N(x1 * slope, 1/precision).
double loglik_regression(double x2, double x1, double slope, double precision);

// Conjugate posterior draw for a Gaussian atom given member sufficient
// statistics: posterior precision (per coordinate) = 1/base_sd^2 +
// count * precision, posterior mean = (base_mean/base_sd^2 + precision *
// coord_sums) / posterior precision. count = 0 gives a fresh base draw.
std::vector<double> draw_gaussian_atom(const std::vector<double>& coord_sums, long long count,
                                       const GaussianViewSpec& spec, double precision, Rng& rng);

// Convenience form over explicit member rows of a row-major n x dim matrix.
std::vector<double> update_atom_gaussian(const double* data, int dim,
                                         const std::vector<int>& members,
                                         const GaussianViewSpec& spec, double precision, Rng& rng);

// Conjugate posterior draw for a regression slope: posterior precision =
// 1/base_sd^2 + precision * sum x1^2, posterior mean = (base_mean/base_sd^2 +
// precision * sum x1 x2) / posterior precision. No members (or all x1 = 0 in
// the sums) reduces to the base draw.
double draw_regression_atom(double sum_x1_sq, double sum_x1_x2, const RegressionViewSpec& spec,
                            double precision, Rng& rng);

double update_atom_regression(const double* x1, const double* x2,
                              const std::vector<int>& members, const RegressionViewSpec& spec,
                              double precision, Rng& rng);

// Posterior draw of a view precision: Gamma(shape + count * dim / 2,
// rate + rss / 2), where rss is the residual sum of squares of the view under
// the current atoms. count = 0 gives a prior draw.
double update_precision(double rss, long long count, int dim, double prec_shape, double prec_rate,
                        Rng& rng);

}  // namespace clic

#endif  // CLIC_KERNELS_HPP
