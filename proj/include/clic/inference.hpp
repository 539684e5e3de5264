#ifndef CLIC_INFERENCE_HPP
#define CLIC_INFERENCE_HPP

#include <map>
#include <utility>
#include <vector>

#include "clic/exec.hpp"
#include "clic/partitions.hpp"
#include "clic/sampler.hpp"

namespace clic {

// Posterior similarity matrix for one view: entry (i, j) is the fraction of
// kept draws with c_vi = c_vj. Symmetric, unit diagonal, row-major n x n.
// Throws std::invalid_argument on an empty trace.
std::vector<double> posterior_similarity(const PosteriorTrace& trace, int view,
                                         Exec exec = Exec::serial);

// Point estimate minimizing the Monte Carlo expected variation of information
// over the kept draws. Candidates are the deduplicated canonical draws in
// first-appearance order; ties keep the earliest. When the trace exceeds the
// caps, candidates and reference draws are subsampled with a fixed internal
// seed, so the result is deterministic for a given trace.
Labels minimize_vi(const PosteriorTrace& trace, int view, Exec exec = Exec::serial,
                   long long max_candidates = 2000, long long max_references = 2000);

struct RandSummary {
  double mean = 0.0;
  double lo = 0.0;   // 2.5% equal-tailed quantile
  double hi = 0.0;   // 97.5% equal-tailed quantile
  std::vector<double> series;
};

// Per-draw Rand index between a view pair, with mean and equal-tailed 95%
// interval (linearly interpolated quantiles).
RandSummary rand_posterior_summary(const PosteriorTrace& trace, int v, int w);

// Empirical PMF of the number of occupied components in one view.
std::map<int, double> k_posterior(const PosteriorTrace& trace, int view);

// Joint empirical PMF over (K_v, K_w).
std::map<std::pair<int, int>, double> joint_k_posterior(const PosteriorTrace& trace, int v, int w);

// Effective sample size via the initial-positive-sequence autocorrelation
// estimator: T / (1 + 2 sum of autocorrelations, truncated at the first
// non-positive consecutive pair sum), clipped to (0, T]. A constant series
// returns T by convention. Requires length >= 10.
double effective_sample_size(const std::vector<double>& series);

}  // namespace clic

#endif  // CLIC_INFERENCE_HPP
