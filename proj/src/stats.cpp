#include "clic/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace clic {

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("sample_sd: need at least two values");
  double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0,1]");
  std::sort(values.begin(), values.end());
  // Linear interpolation between order statistics at h = (n-1)p.
  double h = static_cast<double>(values.size() - 1) * p;
  std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: length mismatch");
  double tv = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
  return 0.5 * tv;
}

namespace {

// Asymptotic Kolmogorov tail with the small-sample correction
// lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D.
double kolmogorov_tail(double lambda) {
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

}  // namespace

double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample_p: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
}

double chi_square_gof_p(const std::vector<long long>& observed,
                        const std::vector<double>& expected_probs) {
  if (observed.size() != expected_probs.size())
    throw std::invalid_argument("chi_square_gof_p: length mismatch");
  long long total = 0;
  for (long long o : observed) total += o;
  if (total < 1) throw std::invalid_argument("chi_square_gof_p: no observations");

  // Pool adjacent bins until every group has expected count >= 5.
  std::vector<double> obs_groups, exp_groups;
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    obs_acc += static_cast<double>(observed[k]);
    exp_acc += expected_probs[k] * static_cast<double>(total);
    if (exp_acc >= 5.0) {
      obs_groups.push_back(obs_acc);
      exp_groups.push_back(exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (exp_groups.empty()) throw std::invalid_argument("chi_square_gof_p: expected counts too small");
    obs_groups.back() += obs_acc;
    exp_groups.back() += exp_acc;
  }
  if (obs_groups.size() < 2)
    throw std::invalid_argument("chi_square_gof_p: need at least two groups after pooling");

  double stat = 0.0;
  for (std::size_t g = 0; g < obs_groups.size(); ++g) {
    double dev = obs_groups[g] - exp_groups[g];
    stat += dev * dev / exp_groups[g];
  }
  boost::math::chi_squared dist(static_cast<double>(obs_groups.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace clic
