#include "clic/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace clic {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;

}  // namespace

void GaussianViewSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("GaussianViewSpec: dim must be at least 1");
  if (static_cast<int>(base_mean.size()) != dim)
    throw std::invalid_argument("GaussianViewSpec: base_mean size must equal dim");
  if (!(base_sd > 0.0) || !(prec_shape > 0.0) || !(prec_rate > 0.0))
    throw std::invalid_argument("GaussianViewSpec: scale parameters must be positive");
}

void RegressionViewSpec::validate() const {
  if (!(base_sd > 0.0) || !(prec_shape > 0.0) || !(prec_rate > 0.0))
    throw std::invalid_argument("RegressionViewSpec: scale parameters must be positive");
  if (covariate_view < 0)
    throw std::invalid_argument("RegressionViewSpec: covariate_view must be non-negative");
}

double loglik_gaussian(const double* x, const double* atom, int dim, double precision) {
  double quad = 0.0;
  for (int d = 0; d < dim; ++d) {
    double dev = x[d] - atom[d];
    quad += dev * dev;
  }
  return 0.5 * dim * (std::log(precision) - kLogTwoPi) - 0.5 * precision * quad;
}

double loglik_regression(double x2, double x1, double slope, double precision) {
  double dev = x2 - slope * x1;
  return 0.5 * (std::log(precision) - kLogTwoPi) - 0.5 * precision * dev * dev;
}

std::vector<double> draw_gaussian_atom(const std::vector<double>& coord_sums, long long count,
                                       const GaussianViewSpec& spec, double precision, Rng& rng) {
  std::vector<double> atom(spec.dim);
  double prior_prec = 1.0 / (spec.base_sd * spec.base_sd);
  double post_prec = prior_prec + static_cast<double>(count) * precision;
  double post_sd = 1.0 / std::sqrt(post_prec);
  for (int d = 0; d < spec.dim; ++d) {
    double sum = count > 0 ? coord_sums[d] : 0.0;
    double post_mean = (prior_prec * spec.base_mean[d] + precision * sum) / post_prec;
    atom[d] = rng.normal(post_mean, post_sd);
  }
  return atom;
}

std::vector<double> update_atom_gaussian(const double* data, int dim,
                                         const std::vector<int>& members,
                                         const GaussianViewSpec& spec, double precision,
                                         Rng& rng) {
  std::vector<double> sums(dim, 0.0);
  for (int i : members)
    for (int d = 0; d < dim; ++d) sums[d] += data[static_cast<std::size_t>(i) * dim + d];
  return draw_gaussian_atom(sums, static_cast<long long>(members.size()), spec, precision, rng);
}

double draw_regression_atom(double sum_x1_sq, double sum_x1_x2, const RegressionViewSpec& spec,
                            double precision, Rng& rng) {
  double prior_prec = 1.0 / (spec.base_sd * spec.base_sd);
  double post_prec = prior_prec + precision * sum_x1_sq;
  double post_mean = (prior_prec * spec.base_mean + precision * sum_x1_x2) / post_prec;
  return rng.normal(post_mean, 1.0 / std::sqrt(post_prec));
}

double update_atom_regression(const double* x1, const double* x2, const std::vector<int>& members,
                              const RegressionViewSpec& spec, double precision, Rng& rng) {
  double sum_sq = 0.0;
  double sum_cross = 0.0;
  for (int i : members) {
    sum_sq += x1[i] * x1[i];
    sum_cross += x1[i] * x2[i];
  }
  return draw_regression_atom(sum_sq, sum_cross, spec, precision, rng);
}

double update_precision(double rss, long long count, int dim, double shape, double rate,
                        Rng& rng) {
  return rng.gamma(shape + 0.5 * static_cast<double>(count) * dim, rate + 0.5 * rss);
}

}  // namespace clic
