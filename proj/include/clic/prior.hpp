#ifndef CLIC_PRIOR_HPP
#define CLIC_PRIOR_HPP

#include <cstdint>
#include <vector>

#include "clic/exec.hpp"
#include "clic/partitions.hpp"
#include "clic/rng.hpp"
#include "clic/stirling.hpp"

namespace clic {

// Hyperparameters of the CLIC joint partition distribution: rho is the
// dependence concentration (small rho pulls the view partitions together,
// large rho makes them independent), gamma[v] is the marginal concentration
// of view v. All strictly positive, at least two views.
struct ClicParams {
  double rho = 1.0;
  std::vector<double> gamma{1.0, 1.0};

  int num_views() const { return static_cast<int>(gamma.size()); }
  void validate() const;  // throws std::invalid_argument on violation
};

// Truncation sizes for the finite Dirichlet approximation, one per view.
struct FiniteApproxParams {
  ClicParams hp;
  std::vector<int> L{5, 5};

  void validate() const;
};

// ln CRP(c; gamma) = ln[ gamma^K prod_k (n_k - 1)! / (gamma)^(n) ].
double crp_log_pmf(const Labels& c, double gamma);

// Exact log joint PMF of a two-view cross-partition. Sums over all auxiliary
// matrices r with r_cell in {1..n_cell} per occupied contingency cell (log
// space, streaming log-sum-exp). The sum is exponential in the cell counts;
// a work guard (product of cell counts <= 10^7) throws std::runtime_error
// directing callers to Monte Carlo instead. Exec::parallel splits the
// mixed-radix range into fixed blocks combined in order, so the result does
// not depend on thread count.
double clic_log_meppf(const Labels& c1, const Labels& c2, const ClicParams& hp,
                      Exec exec = Exec::serial);

// Exact log marginal PMF of one view partition (a hierarchical DP partition
// law): gamma^K / (rho)^(n) sum_r rho^r / (gamma)^(r) prod_k (r_k - 1)! |s(n_k, r_k)|.
// Same guard as clic_log_meppf.
double marginal_log_eppf(const Labels& c, double rho, double gamma);

// Prior P(K_v = m) for one view with n objects. The root partition puts the
// objects into w clusters with the CRP(rho) count law
// P[T = w] = |s(n, w)| rho^w / (rho)^(n), and the view merges those w root
// clusters with the CRP(gamma) count law P[K = m | w] = |s(w, m)| gamma^m / (gamma)^(w);
// the result mixes the second law over the first.
// Returns 0 for m outside {1..n}. Requires table.n_max() >= n.
double prior_k_pmf(int n, int m, double rho, double gamma, const LogStirlingTable& table);

// Expected Rand index of two independent CRP partitions with concentrations
// gamma1, gamma2: (1 + gamma1 gamma2) / ((gamma1 + 1)(gamma2 + 1)).
// This is the rho -> infinity limit of the dependent model, exposed as an
// explicit branch so tests never need huge floats.
double independent_crp_rand(double gamma1, double gamma2);

// Expected Rand index between the two view partitions, free of n:
// nu + (1 - nu) * independent_crp_rand(gamma1, gamma2) with nu = 1/(rho + 1),
// an affine bridge in nu between independence and identical partitions.
// The gamma -> infinity limit is 1 - rho/(rho + 1) * 0, i.e. tends to 1.
double expected_rand_infinite(const ClicParams& hp);

// Expected Rand index under the finite approximation with equal gamma across
// the two views: nu + (1 - nu) * kappa(L1, L2), where
//   kappa = [ (1 - 1/L1)/(g + 1) + 1/L1 ] [ (1 - 1/L2)/(g + 1) + 1/L2 ]
//         + (1 - 1/L1)(1 - 1/L2) g^2 / (g + 1)^2.
// kappa -> independent_crp_rand(g, g) as L1, L2 -> infinity, and the gap to
// the infinite model decays like 1/L^2 at g = 1.
double expected_rand_finite(const FiniteApproxParams& fp);

// One forward draw of V partitions from the independence-centered urn. Each
// object either joins an existing view-combination with weight equal to its
// count, or, with weight rho, draws one value per view from that view's inner
// urn (existing atom with weight equal to its independent-draw count, new
// atom with weight gamma[v]). Returns canonical labels per view.
std::vector<Labels> sample_urn(int n, const ClicParams& hp, Rng& rng);

// One forward draw of V partitions from the finite approximation: per-view
// weights q_v ~ Dirichlet(gamma_v / L_v, ...), cell weights p ~
// Dirichlet(rho * outer(q_1, ..., q_V)), then n iid categorical cell draws.
// Returns canonical labels per view.
std::vector<Labels> sample_finite_prior(int n, const FiniteApproxParams& fp, Rng& rng);

// Aggregates over many forward draws, used by the Monte Carlo oracles and the
// benchmark. Draw d uses the child stream (seed, d), results are reduced in
// draw order, so serial and parallel execution return identical values.
struct PriorMcStats {
  long long num_draws = 0;
  // One entry per unordered view pair (v, w), v < w, in lexicographic order:
  // mean Rand, and the Monte Carlo standard error of that mean.
  std::vector<double> rand_mean;
  std::vector<double> rand_se;
  // Per view: histogram over K = 1..n of the number of clusters.
  std::vector<std::vector<long long>> k_counts;
};

PriorMcStats urn_mc(int n, const ClicParams& hp, long long num_draws, std::uint64_t seed,
                    Exec exec = Exec::serial);

PriorMcStats finite_prior_mc(int n, const FiniteApproxParams& fp, long long num_draws,
                             std::uint64_t seed, Exec exec = Exec::serial);

}  // namespace clic

#endif  // CLIC_PRIOR_HPP
