#ifndef CLIC_RNG_HPP
#define CLIC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace clic {

// One splitmix64 mixing step. Bijective on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream-splitting rule: every consumer of randomness (chain, Monte Carlo
// draw, generator) gets child_seed(master, stream) with a distinct stream
// index. Distinct streams yield distinct, well-mixed seeds for a fixed
// master seed, so results do not depend on scheduling or thread count.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x51ce2bd5a53f95a1ULL));
}

// Seeded random stream. Wraps a 64-bit Mersenne twister plus the handful of
// scalar distributions the samplers need. Not thread safe; use one Rng per
// worker with distinct seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream) : engine_(child_seed(master, stream)) {}

  std::mt19937_64& engine() { return engine_; }

  // Uniform on [0, 1).
  double uniform() { return unit_(engine_); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // One of {0, ..., m - 1} uniformly.
  int uniform_int(int m) { return std::uniform_int_distribution<int>(0, m - 1)(engine_); }

  double normal(double mean, double sd) {
    return std::normal_distribution<double>(mean, sd)(engine_);
  }

  // Gamma with shape/rate parameterization (mean shape/rate).
  double gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
  }

  double beta(double a, double b) {
    double x = gamma(a, 1.0);
    double y = gamma(b, 1.0);
    return x / (x + y);
  }

  // ln of a Gamma(shape, 1) draw, stable for arbitrarily small shapes.
  // Uses X = G * U^(1/shape) with G ~ Gamma(shape + 1, 1), which has the
  // exact target law, so ln X never underflows even when X would.
  double log_gamma_draw(double shape) {
    double g = std::gamma_distribution<double>(shape + 1.0, 1.0)(engine_);
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return std::log(g) + std::log(u) / shape;
  }

  // Dirichlet draw; out receives probabilities summing to 1.
  // Runs in log space so that tiny concentrations cannot underflow to an
  // all-zero vector.
  void dirichlet(const std::vector<double>& alpha, std::vector<double>& out) {
    const std::size_t m = alpha.size();
    out.resize(m);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      if (!(alpha[k] > 0.0)) throw std::invalid_argument("dirichlet: concentrations must be positive");
      out[k] = log_gamma_draw(alpha[k]);
      if (out[k] > max_log) max_log = out[k];
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      out[k] = std::exp(out[k] - max_log);
      sum += out[k];
    }
    for (std::size_t k = 0; k < m; ++k) out[k] /= sum;
  }

  // Index draw from unnormalized nonnegative weights.
  int categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: total weight must be positive");
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
      acc += weights[k];
      if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  // Index draw from unnormalized log weights (log-sum-exp normalization).
  int categorical_log(const std::vector<double>& log_weights) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights)
      if (lw > max_log) max_log = lw;
    if (!(max_log > -std::numeric_limits<double>::infinity()))
      throw std::invalid_argument("categorical_log: all weights are zero");
    double total = 0.0;
    for (double lw : log_weights) total += std::exp(lw - max_log);
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < log_weights.size(); ++k) {
      acc += std::exp(log_weights[k] - max_log);
      if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(log_weights.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace clic

#endif  // CLIC_RNG_HPP
