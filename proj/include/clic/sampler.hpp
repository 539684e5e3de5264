#ifndef CLIC_SAMPLER_HPP
#define CLIC_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clic/kernels.hpp"
#include "clic/partitions.hpp"
#include "clic/prior.hpp"
#include "clic/rng.hpp"
#include "clic/stirling.hpp"

namespace clic {

// Observations for V views of the same n objects. x[v] is row-major n x dim[v].
struct MultiViewData {
  long long n = 0;
  std::vector<int> dim;
  std::vector<std::vector<double>> x;

  int num_views() const { return static_cast<int>(dim.size()); }
  const double* row(int v, long long i) const { return x[v].data() + i * dim[v]; }
  void validate() const;  // throws std::invalid_argument on inconsistency
};

struct RhoScheme {
  enum class Kind { fixed, gamma_prior, grid };
  Kind kind = Kind::gamma_prior;
  double fixed_value = 1.0;
  double a = 1.0;
  double b = 1.0;
  std::vector<double> grid;  // nonempty, ascending, positive

  static RhoScheme Fixed(double value);
  static RhoScheme GammaPrior(double a, double b);
  static RhoScheme Grid(std::vector<double> points);
  void validate() const;
};

// Grid used in the observational-data illustration: 10^-2 to 150 step 0.5.
std::vector<double> default_rho_grid();

struct LabelScheme {
  enum class Kind { joint, conditional };
  Kind kind = Kind::conditional;
  // Permutation of {0..V-1}; the compositional update visits views in this
  // order. Empty means identity order.
  std::vector<int> view_order;
};

// Observation model for one view; flat-likelihood runs ignore it.
struct ViewKernel {
  enum class Type { gaussian, regression };
  Type type = Type::gaussian;
  GaussianViewSpec gauss;
  RegressionViewSpec reg;
};

struct SamplerConfig {
  int iterations = 30000;
  int burn_in = 10000;
  int thin = 2;
  RhoScheme rho;
  LabelScheme labels;
  std::uint64_t seed = 0;
  std::vector<int> L{5, 5};
  std::vector<double> gamma{1.0, 1.0};
  std::vector<ViewKernel> kernels;
  // Prior-Gibbs mode: all log likelihoods are treated as 0, so the chain
  // targets the prior; used by the forward/Gibbs consistency checks.
  bool flat_likelihood = false;

  int num_views() const { return static_cast<int>(L.size()); }
  void validate(const MultiViewData& data) const;
};

// Mutable state of one chain. Confined to one worker; every field the sweep
// touches is owned here. labels are 0-based component ids in [0, L_v).
// cells is the flattened V-dimensional contingency array over the component
// grid (view 0 slowest); prefix[s] caches the margin over the first s+1 views
// in the configured conditional order. aux r lives on the same grid with
// r_cell <= n_cell and r_cell >= 1 on occupied cells after an aux update.
struct ChainState {
  std::vector<std::vector<int>> labels;          // [view][object]
  std::vector<long long> cells;                  // prod(L) counts
  std::vector<std::vector<long long>> prefix;    // conditional-order margins
  std::vector<long long> r_cells;                // prod(L) aux counts
  std::vector<std::vector<double>> q;            // [view][component]
  std::vector<std::vector<double>> atoms;        // [view] L_v x dim_v row-major
  std::vector<double> precision;                 // [view]
  double rho = 1.0;
  double eta = 0.5;                               // persisted augmentation variable

  long long cell_index(const std::vector<int>& L, const std::vector<int>& component) const;
};

// Kept draws plus the scalar series the summaries need. rand_pairs columns
// enumerate unordered view pairs (v, w), v < w, lexicographically.
struct PosteriorTrace {
  long long n = 0;
  int num_views = 0;
  std::vector<int> L;
  std::vector<std::vector<Labels>> labels;       // [draw][view], canonical
  std::vector<double> rho;                       // [draw]
  std::vector<std::vector<double>> rand_pairs;   // [draw][pair]
  std::vector<std::vector<int>> k;               // [draw][view]
  SamplerConfig config;
  double wall_seconds = 0.0;

  long long num_draws() const { return static_cast<long long>(labels.size()); }
  static int pair_column(int v, int w, int num_views);
};

// Uniform labels over [L_v], uniform q, base-measure atoms, prior precisions,
// rho at the scheme's center (fixed value, prior mean, or grid median),
// r = min(1, n_cell). Deterministic given the rng state.
ChainState init_state(const MultiViewData& data, const SamplerConfig& config, Rng& rng);

// One sweep over objects sampling (c_1i, ..., c_Vi) jointly from the full
// component grid: weight(cell) = likelihood(cell) * (rho prod_v q_v[k_v] +
// n_cell without i).
void update_labels_joint(ChainState& state, const MultiViewData& data,
                         const SamplerConfig& config, Rng& rng);

// One sweep using the compositional scheme in the configured view order:
// stage s samples c_vi from likelihood_v * (rho prod_{u<=s} q_u[k_u] +
// prefix margin without i). Distribution-equal to the joint update when the
// likelihood is flat.
void update_labels_conditional(ChainState& state, const MultiViewData& data,
                               const SamplerConfig& config, Rng& rng);

// Per occupied cell, draw r_cell ~ multinomial with weights
// |s(n_cell, w)| (rho prod_v q_v)^w over w = 0..n_cell (zero weight at w = 0
// forces r_cell >= 1). Requires table.n_max() >= max cell count.
void update_aux_r(ChainState& state, const SamplerConfig& config, const LogStirlingTable& table,
                  Rng& rng);

// q_v ~ Dirichlet(gamma_v / L_v + r_v1, ..., gamma_v / L_v + r_vLv) with
// r_vk the aux margins.
void update_q(ChainState& state, const SamplerConfig& config, Rng& rng);

// Augmented concentration update targeting pi(rho) rho^(r-1) (rho + n)
// Beta(rho + 1, n): eta ~ Beta(rho + 1, n), then rho from the two-component
// Gamma mixture with odds (a + r - 1) / (n (b - ln eta)).
// Requires total aux count r >= 1.
void update_rho_escobar_west(ChainState& state, long long n, double a, double b, Rng& rng);

// Discrete update of rho over a fixed grid, weights proportional to the
// marginal label PMF given q: lnG(rho) - lnG(n + rho) +
// sum_cells [lnG(n_cell + rho prod q) - lnG(rho prod q)].
void update_rho_griddy(ChainState& state, long long n, const std::vector<double>& grid, Rng& rng);

// Conjugate refresh of every atom row (empty components draw fresh from the
// base measure, keeping exactly L_v rows) and of the per-view precisions.
void update_atoms(ChainState& state, const MultiViewData& data, const SamplerConfig& config,
                  Rng& rng);
void update_precisions(ChainState& state, const MultiViewData& data, const SamplerConfig& config,
                       Rng& rng);

// Full Gibbs run. Sweep order: labels, aux r, q, rho, atoms, precisions
// (aux precedes q and rho because both condition on it). Keeps
// floor((iterations - burn_in)/thin) draws; deterministic under a fixed seed.
PosteriorTrace run_chain(const MultiViewData& data, const SamplerConfig& config);

// Exact per-object update laws over the component grid, exposed for the
// distribution-equality tests: probability of each cell for object i under
// the joint and compositional schemes, holding the rest of the state fixed.
std::vector<double> object_cell_probs_joint(const ChainState& state, const MultiViewData& data,
                                            const SamplerConfig& config, long long i);
std::vector<double> object_cell_probs_conditional(const ChainState& state,
                                                  const MultiViewData& data,
                                                  const SamplerConfig& config, long long i);

// Recomputes the contingency cache from the labels and checks every invariant
// (cell totals, prefix margins, aux bounds, q simplex); throws
// std::logic_error naming the first violation. Test support.
void validate_state(const ChainState& state, const MultiViewData& data,
                    const SamplerConfig& config);

}  // namespace clic

#endif  // CLIC_SAMPLER_HPP
