// Serial vs OpenMP timings for the parallel code paths, plus an agreement
// column: the Monte Carlo, similarity, and point-estimate kernels must agree
// bitwise across modes (per-draw random streams with ordered reduction), the
// log-sum-exp enumeration within 1e-12 relative.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "clic/inference.hpp"
#include "clic/partitions.hpp"
#include "clic/prior.hpp"
#include "clic/rng.hpp"
#include "clic/sampler.hpp"

using namespace clic;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double time_call(Fn fn) {
  double start = now_seconds();
  fn();
  return now_seconds() - start;
}

void report(const char* name, double serial_s, double parallel_s, bool agree, double gap) {
  std::printf("%-22s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s (gap %.2e)\n", name,
              serial_s, parallel_s, serial_s / parallel_s, agree ? "agree" : "DISAGREE", gap);
}

}  // namespace

int main() {
  std::printf("OpenMP workers: %d\n\n", omp_get_max_threads());

  {
    // 2 x 5 contingency with every cell of size 5: 5^10 ~ 9.8M terms.
    Labels c1(50), c2(50);
    for (int i = 0; i < 50; ++i) {
      c1[i] = i < 25 ? 1 : 2;
      c2[i] = i % 5 + 1;
    }
    ClicParams hp{1.3, {0.8, 1.7}};
    double serial_value = 0.0, parallel_value = 0.0;
    double ts = time_call([&] { serial_value = clic_log_meppf(c1, c2, hp, Exec::serial); });
    double tp = time_call([&] { parallel_value = clic_log_meppf(c1, c2, hp, Exec::parallel); });
    double gap = std::abs(serial_value - parallel_value) / std::abs(serial_value);
    report("clic_log_meppf", ts, tp, gap <= 1e-12, gap);
  }

  {
    ClicParams hp{1.0, {1.0, 1.0}};
    PriorMcStats serial_stats, parallel_stats;
    double ts = time_call([&] { serial_stats = urn_mc(50, hp, 20000, 7, Exec::serial); });
    double tp = time_call([&] { parallel_stats = urn_mc(50, hp, 20000, 7, Exec::parallel); });
    bool agree = serial_stats.rand_mean == parallel_stats.rand_mean &&
                 serial_stats.rand_se == parallel_stats.rand_se &&
                 serial_stats.k_counts == parallel_stats.k_counts;
    report("urn_mc", ts, tp, agree, 0.0);
  }

  {
    FiniteApproxParams fp;
    fp.L = {25, 25};
    PriorMcStats serial_stats, parallel_stats;
    double ts = time_call([&] { serial_stats = finite_prior_mc(50, fp, 5000, 7, Exec::serial); });
    double tp =
        time_call([&] { parallel_stats = finite_prior_mc(50, fp, 5000, 7, Exec::parallel); });
    bool agree = serial_stats.rand_mean == parallel_stats.rand_mean &&
                 serial_stats.k_counts == parallel_stats.k_counts;
    report("finite_prior_mc", ts, tp, agree, 0.0);
  }

  {
    // Synthetic trace: 2000 draws of 300 labels per view.
    PosteriorTrace trace;
    trace.n = 300;
    trace.num_views = 2;
    trace.L = {6, 6};
    Rng rng(99);
    for (int d = 0; d < 2000; ++d) {
      std::vector<Labels> draw(2);
      for (int v = 0; v < 2; ++v) {
        std::vector<int> raw(300);
        for (int i = 0; i < 300; ++i) raw[i] = rng.uniform_int(6);
        draw[v] = canonicalize(raw);
      }
      trace.labels.push_back(std::move(draw));
      trace.rho.push_back(1.0);
    }

    std::vector<double> serial_psm, parallel_psm;
    double ts = time_call([&] { serial_psm = posterior_similarity(trace, 0, Exec::serial); });
    double tp = time_call([&] { parallel_psm = posterior_similarity(trace, 0, Exec::parallel); });
    report("posterior_similarity", ts, tp, serial_psm == parallel_psm, 0.0);

    Labels serial_point, parallel_point;
    ts = time_call([&] { serial_point = minimize_vi(trace, 0, Exec::serial, 200, 500); });
    tp = time_call([&] { parallel_point = minimize_vi(trace, 0, Exec::parallel, 200, 500); });
    report("minimize_vi", ts, tp, serial_point == parallel_point, 0.0);
  }

  return 0;
}
