#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "clic/inference.hpp"
#include "clic/partitions.hpp"
#include "clic/rng.hpp"
#include "clic/sampler.hpp"
#include "clic/stats.hpp"

using namespace clic;

namespace {

PosteriorTrace make_trace(const std::vector<std::vector<Labels>>& draws) {
  PosteriorTrace trace;
  trace.num_views = static_cast<int>(draws.front().size());
  trace.n = static_cast<long long>(draws.front().front().size());
  trace.L.assign(trace.num_views, 0);
  for (const std::vector<Labels>& draw : draws) {
    trace.labels.push_back(draw);
    trace.rho.push_back(1.0);
    std::vector<int> k(trace.num_views);
    for (int v = 0; v < trace.num_views; ++v) {
      k[v] = num_clusters(draw[v]);
      trace.L[v] = std::max(trace.L[v], k[v]);
    }
    trace.k.push_back(k);
    std::vector<double> pairs;
    for (int v = 0; v < trace.num_views; ++v)
      for (int w = v + 1; w < trace.num_views; ++w)
        pairs.push_back(rand_index(draw[v], draw[w]));
    trace.rand_pairs.push_back(pairs);
  }
  return trace;
}

}  // namespace

TEST_CASE("posterior similarity from a two-draw trace") {
  PosteriorTrace trace = make_trace({
      {{1, 1, 2}, {1, 1, 1}},
      {{1, 2, 2}, {1, 1, 1}},
  });
  std::vector<double> psm = posterior_similarity(trace, 0);
  REQUIRE(psm.size() == 9);
  CHECK(psm[0 * 3 + 0] == 1.0);
  CHECK(psm[0 * 3 + 1] == 0.5);
  CHECK(psm[0 * 3 + 2] == 0.0);
  CHECK(psm[1 * 3 + 2] == 0.5);
  CHECK(psm[2 * 3 + 1] == psm[1 * 3 + 2]);

  std::vector<double> view2 = posterior_similarity(trace, 1);
  for (double p : view2) CHECK(p == 1.0);

  PosteriorTrace empty;
  CHECK_THROWS_AS(posterior_similarity(empty, 0), std::invalid_argument);
  CHECK_THROWS_AS(posterior_similarity(trace, 2), std::invalid_argument);
}

TEST_CASE("posterior similarity is identical across execution modes") {
  Rng rng(3);
  std::vector<std::vector<Labels>> draws;
  for (int d = 0; d < 400; ++d) {
    std::vector<int> raw(60);
    for (int i = 0; i < 60; ++i) raw[i] = rng.uniform_int(4);
    draws.push_back({canonicalize(raw), canonicalize(raw)});
  }
  PosteriorTrace trace = make_trace(draws);
  CHECK(posterior_similarity(trace, 0, Exec::serial) ==
        posterior_similarity(trace, 0, Exec::parallel));
}

TEST_CASE("point estimate picks the dominant partition") {
  Labels winner{1, 1, 2, 2, 3};
  Labels other{1, 2, 2, 2, 3};
  std::vector<std::vector<Labels>> draws;
  for (int d = 0; d < 8; ++d) draws.push_back({winner, winner});
  draws.push_back({other, other});
  draws.push_back({other, other});
  PosteriorTrace trace = make_trace(draws);
  CHECK(minimize_vi(trace, 0) == winner);
  CHECK(minimize_vi(trace, 1, Exec::parallel) == winner);
}

TEST_CASE("point estimate ties keep the earliest candidate") {
  // Orthogonal splits: both candidates see the same objective by symmetry,
  // computed through the same contingency arithmetic, so the tie is exact.
  Labels first{1, 1, 2, 2};
  Labels second{1, 2, 1, 2};
  PosteriorTrace trace = make_trace({{first, first}, {second, second}});
  CHECK(minimize_vi(trace, 0) == first);

  PosteriorTrace swapped = make_trace({{second, second}, {first, first}});
  CHECK(minimize_vi(swapped, 0) == second);
}

TEST_CASE("point estimate subsampling is deterministic") {
  Rng rng(5);
  std::vector<std::vector<Labels>> draws;
  for (int d = 0; d < 600; ++d) {
    std::vector<int> raw(20);
    for (int i = 0; i < 20; ++i) raw[i] = rng.uniform_int(3);
    draws.push_back({canonicalize(raw)});
  }
  PosteriorTrace trace = make_trace(draws);
  Labels a = minimize_vi(trace, 0, Exec::serial, 50, 80);
  Labels b = minimize_vi(trace, 0, Exec::serial, 50, 80);
  Labels c = minimize_vi(trace, 0, Exec::parallel, 50, 80);
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("rand summary over a known series") {
  std::vector<std::vector<Labels>> draws;
  for (int d = 0; d < 3; ++d)
    draws.push_back({{1, 1, 2, 2}, d == 0 ? Labels{1, 1, 2, 2} : Labels{1, 2, 1, 2}});
  PosteriorTrace trace = make_trace(draws);
  RandSummary summary = rand_posterior_summary(trace, 0, 1);
  REQUIRE(summary.series.size() == 3);
  CHECK(summary.series[0] == doctest::Approx(1.0));
  CHECK(summary.series[1] == doctest::Approx(1.0 / 3.0));
  CHECK(summary.mean == doctest::Approx((1.0 + 2.0 / 3.0) / 3.0));
  CHECK(summary.lo <= summary.mean);
  CHECK(summary.hi >= summary.mean);
}

TEST_CASE("cluster-count posteriors") {
  PosteriorTrace trace = make_trace({
      {{1, 1, 1}, {1, 2, 3}},
      {{1, 1, 2}, {1, 2, 3}},
      {{1, 1, 2}, {1, 2, 2}},
      {{1, 2, 3}, {1, 2, 2}},
  });
  std::map<int, double> pmf = k_posterior(trace, 0);
  CHECK(pmf[1] == doctest::Approx(0.25));
  CHECK(pmf[2] == doctest::Approx(0.5));
  CHECK(pmf[3] == doctest::Approx(0.25));

  std::map<std::pair<int, int>, double> joint = joint_k_posterior(trace, 0, 1);
  double total = 0.0;
  for (const auto& [key, p] : joint) total += p;
  CHECK(total == doctest::Approx(1.0));
  CHECK(joint[{2, 3}] == doctest::Approx(0.25));
  CHECK(joint[{2, 2}] == doctest::Approx(0.25));
}

TEST_CASE("effective sample size") {
  Rng rng(9);

  std::vector<double> iid(4000);
  for (double& x : iid) x = rng.normal(0.0, 1.0);
  double ess_iid = effective_sample_size(iid);
  CHECK(ess_iid >= 2000.0);
  CHECK(ess_iid <= 4000.0);

  // AR(1) with phi = 0.9 has ESS/T = (1 - phi)/(1 + phi) = 1/19.
  std::vector<double> ar(20000);
  ar[0] = 0.0;
  for (std::size_t t = 1; t < ar.size(); ++t) ar[t] = 0.9 * ar[t - 1] + rng.normal(0.0, 1.0);
  double ess_ar = effective_sample_size(ar);
  double expected = 20000.0 / 19.0;
  CHECK(ess_ar >= 0.6 * expected);
  CHECK(ess_ar <= 1.6 * expected);

  std::vector<double> constant(100, 3.14);
  CHECK(effective_sample_size(constant) == 100.0);

  CHECK_THROWS_AS(effective_sample_size(std::vector<double>(9, 0.0)), std::invalid_argument);
}

TEST_CASE("quantiles, mean, sd") {
  std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(v, 1.0) == doctest::Approx(4.0));
  CHECK(mean(v) == doctest::Approx(2.5));
  CHECK(sample_sd(v) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK_THROWS_AS(mean(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(sample_sd(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("total variation distance") {
  CHECK(total_variation({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.5));
  CHECK(total_variation({0.2, 0.8}, {0.2, 0.8}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(total_variation({0.5, 0.5}, {1.0}), std::invalid_argument);
}

TEST_CASE("two-sample KS separates shifted samples") {
  Rng rng(13);
  std::vector<double> a(800), b(800), shifted(800);
  for (int i = 0; i < 800; ++i) {
    a[i] = rng.normal(0.0, 1.0);
    b[i] = rng.normal(0.0, 1.0);
    shifted[i] = rng.normal(1.0, 1.0);
  }
  CHECK(ks_two_sample_p(a, b) > 0.01);
  CHECK(ks_two_sample_p(a, shifted) < 1e-6);
}

TEST_CASE("chi-square goodness of fit") {
  CHECK(chi_square_gof_p({10, 10}, {0.5, 0.5}) == doctest::Approx(1.0));

  // 600 fair-die rolls dead on the expectation.
  std::vector<long long> fair(6, 100);
  std::vector<double> probs(6, 1.0 / 6.0);
  CHECK(chi_square_gof_p(fair, probs) == doctest::Approx(1.0));

  std::vector<long long> biased{200, 80, 80, 80, 80, 80};
  CHECK(chi_square_gof_p(biased, probs) < 1e-6);

  // Sparse tail bins must be pooled, not rejected.
  std::vector<long long> sparse{50, 48, 2, 0};
  std::vector<double> sparse_probs{0.5, 0.46, 0.03, 0.01};
  double p = chi_square_gof_p(sparse, sparse_probs);
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
}
