#include "clic/inference.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "clic/rng.hpp"
#include "clic/stats.hpp"

namespace clic {

namespace {

void require_view(const PosteriorTrace& trace, int view) {
  if (trace.num_draws() == 0) throw std::invalid_argument("posterior trace is empty");
  if (view < 0 || view >= trace.num_views) throw std::invalid_argument("view index out of range");
}

// Draw `take` distinct indices from [0, size) with a fixed seed and return
// them ascending; identity when size <= take.
std::vector<long long> subsample_indices(long long size, long long take, std::uint64_t seed) {
  std::vector<long long> idx(size);
  for (long long i = 0; i < size; ++i) idx[i] = i;
  if (size <= take) return idx;
  Rng rng(seed);
  for (long long i = 0; i < take; ++i) {
    long long j = i + rng.uniform_int(static_cast<int>(size - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::vector<double> posterior_similarity(const PosteriorTrace& trace, int view, Exec exec) {
  require_view(trace, view);
  const long long n = trace.n;
  const long long D = trace.num_draws();
  // Flat copy of the view's draws for cache-friendly pair scans.
  std::vector<int> lab(static_cast<std::size_t>(D) * n);
  for (long long d = 0; d < D; ++d)
    std::copy(trace.labels[d][view].begin(), trace.labels[d][view].end(),
              lab.begin() + static_cast<std::size_t>(d) * n);

  std::vector<double> psm(static_cast<std::size_t>(n) * n, 0.0);
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::parallel)
  for (long long i = 0; i < n; ++i) {
    psm[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (long long j = i + 1; j < n; ++j) {
      long long together = 0;
      for (long long d = 0; d < D; ++d) {
        const int* row = lab.data() + static_cast<std::size_t>(d) * n;
        together += row[i] == row[j];
      }
      double value = static_cast<double>(together) / static_cast<double>(D);
      psm[static_cast<std::size_t>(i) * n + j] = value;
      psm[static_cast<std::size_t>(j) * n + i] = value;
    }
  }
  return psm;
}

Labels minimize_vi(const PosteriorTrace& trace, int view, Exec exec, long long max_candidates,
                   long long max_references) {
  require_view(trace, view);
  if (max_candidates < 1 || max_references < 1)
    throw std::invalid_argument("minimize_vi: caps must be positive");
  const long long D = trace.num_draws();

  // Deduplicated canonical draws in first-appearance order.
  std::vector<const Labels*> candidates;
  {
    std::set<Labels> seen;
    for (long long d = 0; d < D; ++d)
      if (seen.insert(trace.labels[d][view]).second) candidates.push_back(&trace.labels[d][view]);
  }
  std::vector<long long> cand_idx =
      subsample_indices(static_cast<long long>(candidates.size()), max_candidates, 20240817u);
  std::vector<long long> ref_idx = subsample_indices(D, max_references, 20240818u);

  std::vector<double> objective(cand_idx.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long long c = 0; c < static_cast<long long>(cand_idx.size()); ++c) {
    const Labels& cand = *candidates[cand_idx[c]];
    double total = 0.0;
    for (long long r : ref_idx) total += variation_of_information(cand, trace.labels[r][view]);
    objective[c] = total / static_cast<double>(ref_idx.size());
  }

  long long best = 0;
  for (long long c = 1; c < static_cast<long long>(cand_idx.size()); ++c)
    if (objective[c] < objective[best]) best = c;  // strict: ties keep the earliest
  return *candidates[cand_idx[best]];
}

RandSummary rand_posterior_summary(const PosteriorTrace& trace, int v, int w) {
  require_view(trace, v);
  require_view(trace, w);
  if (v == w) throw std::invalid_argument("rand_posterior_summary: views must differ");
  const int col = PosteriorTrace::pair_column(v, w, trace.num_views);
  RandSummary summary;
  summary.series.resize(trace.num_draws());
  for (long long d = 0; d < trace.num_draws(); ++d) summary.series[d] = trace.rand_pairs[d][col];
  summary.mean = mean(summary.series);
  summary.lo = quantile(summary.series, 0.025);
  summary.hi = quantile(summary.series, 0.975);
  return summary;
}

std::map<int, double> k_posterior(const PosteriorTrace& trace, int view) {
  require_view(trace, view);
  std::map<int, double> pmf;
  for (long long d = 0; d < trace.num_draws(); ++d) pmf[trace.k[d][view]] += 1.0;
  for (auto& entry : pmf) entry.second /= static_cast<double>(trace.num_draws());
  return pmf;
}

std::map<std::pair<int, int>, double> joint_k_posterior(const PosteriorTrace& trace, int v,
                                                        int w) {
  require_view(trace, v);
  require_view(trace, w);
  std::map<std::pair<int, int>, double> pmf;
  for (long long d = 0; d < trace.num_draws(); ++d)
    pmf[{trace.k[d][v], trace.k[d][w]}] += 1.0;
  for (auto& entry : pmf) entry.second /= static_cast<double>(trace.num_draws());
  return pmf;
}

double effective_sample_size(const std::vector<double>& series) {
  const long long T = static_cast<long long>(series.size());
  if (T < 10) throw std::invalid_argument("effective_sample_size: need at least 10 points");
  // An exactly constant series carries no autocorrelation information; by
  // convention it counts as fully mixed. (Mean subtraction below would leave
  // identical rounding residuals and a spurious tau of order T.)
  auto [mn, mx] = std::minmax_element(series.begin(), series.end());
  if (*mn == *mx) return static_cast<double>(T);
  const double m = mean(series);
  std::vector<double> centered(T);
  for (long long t = 0; t < T; ++t) centered[t] = series[t] - m;
  auto autocov = [&](long long lag) {
    double c = 0.0;
    for (long long t = 0; t + lag < T; ++t) c += centered[t] * centered[t + lag];
    return c / static_cast<double>(T);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return static_cast<double>(T);

  // Initial positive sequence: sum pair autocorrelations while positive.
  double pair_sum = 0.0;
  for (long long lag = 0; lag + 1 < T; lag += 2) {
    double pair = (autocov(lag) + autocov(lag + 1)) / c0;
    if (pair <= 0.0) break;
    pair_sum += pair;
  }
  double tau = std::max(2.0 * pair_sum - 1.0, 1e-12);
  double ess = static_cast<double>(T) / tau;
  return std::min(ess, static_cast<double>(T));
}

}  // namespace clic
