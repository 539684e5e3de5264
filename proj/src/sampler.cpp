#include "clic/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace clic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

long long product(const std::vector<int>& L) {
  long long total = 1;
  for (int l : L) total *= l;
  return total;
}

// Strides of the flattened component grid, view 0 slowest.
std::vector<long long> cell_strides(const std::vector<int>& L) {
  const int V = static_cast<int>(L.size());
  std::vector<long long> s(V);
  s[V - 1] = 1;
  for (int v = V - 2; v >= 0; --v) s[v] = s[v + 1] * L[v + 1];
  return s;
}

std::vector<int> resolve_order(const SamplerConfig& config) {
  if (!config.labels.view_order.empty()) return config.labels.view_order;
  std::vector<int> order(config.num_views());
  std::iota(order.begin(), order.end(), 0);
  return order;
}

// Adds delta to the cell count and every prefix margin object i belongs to.
void touch_object(ChainState& state, const SamplerConfig& config,
                  const std::vector<long long>& strides, const std::vector<int>& order,
                  long long i, long long delta) {
  const int V = config.num_views();
  long long cell = 0;
  for (int v = 0; v < V; ++v) cell += static_cast<long long>(state.labels[v][i]) * strides[v];
  state.cells[cell] += delta;
  long long pidx = 0;
  for (int s = 0; s < V; ++s) {
    int v = order[s];
    pidx = pidx * config.L[v] + state.labels[v][i];
    state.prefix[s][pidx] += delta;
  }
}

// rho * prod_v q_v[k_v] for every flat cell.
std::vector<double> cell_prior_mass(const ChainState& state, const SamplerConfig& config,
                                    const std::vector<long long>& strides, double rho) {
  const int V = config.num_views();
  const long long total = product(config.L);
  std::vector<double> mass(total);
  for (long long j = 0; j < total; ++j) {
    double m = rho;
    for (int v = 0; v < V; ++v)
      m *= state.q[v][static_cast<std::size_t>((j / strides[v]) % config.L[v])];
    mass[j] = m;
  }
  return mass;
}

// Log likelihood of object i's view-v observation under each of the L_v
// atoms; zeros when the run is flat or the view has no kernel.
void object_view_logliks(const ChainState& state, const MultiViewData& data,
                         const SamplerConfig& config, long long i, int v,
                         std::vector<double>& out) {
  out.assign(config.L[v], 0.0);
  if (config.flat_likelihood || config.kernels.empty()) return;
  const ViewKernel& kernel = config.kernels[v];
  if (kernel.type == ViewKernel::Type::gaussian) {
    const int dim = data.dim[v];
    for (int k = 0; k < config.L[v]; ++k)
      out[k] = loglik_gaussian(data.row(v, i), state.atoms[v].data() + static_cast<std::size_t>(k) * dim,
                               dim, state.precision[v]);
  } else {
    double x1 = data.row(kernel.reg.covariate_view, i)[0];
    double x2 = data.row(v, i)[0];
    for (int k = 0; k < config.L[v]; ++k)
      out[k] = loglik_regression(x2, x1, state.atoms[v][k], state.precision[v]);
  }
}

}  // namespace

void MultiViewData::validate() const {
  if (n < 1) throw std::invalid_argument("MultiViewData: need at least one object");
  if (dim.size() != x.size())
    throw std::invalid_argument("MultiViewData: dim and x must have one entry per view");
  if (dim.empty()) throw std::invalid_argument("MultiViewData: need at least one view");
  for (int v = 0; v < num_views(); ++v) {
    if (dim[v] < 1) throw std::invalid_argument("MultiViewData: dims must be at least 1");
    if (static_cast<long long>(x[v].size()) != n * dim[v])
      throw std::invalid_argument("MultiViewData: x[v] must hold n x dim[v] values");
  }
}

RhoScheme RhoScheme::Fixed(double value) {
  RhoScheme s;
  s.kind = Kind::fixed;
  s.fixed_value = value;
  return s;
}

RhoScheme RhoScheme::GammaPrior(double a, double b) {
  RhoScheme s;
  s.kind = Kind::gamma_prior;
  s.a = a;
  s.b = b;
  return s;
}

RhoScheme RhoScheme::Grid(std::vector<double> points) {
  RhoScheme s;
  s.kind = Kind::grid;
  s.grid = std::move(points);
  return s;
}

void RhoScheme::validate() const {
  switch (kind) {
    case Kind::fixed:
      if (!(fixed_value > 0.0)) throw std::invalid_argument("RhoScheme: fixed rho must be positive");
      break;
    case Kind::gamma_prior:
      if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("RhoScheme: gamma prior parameters must be positive");
      break;
    case Kind::grid:
      if (grid.empty()) throw std::invalid_argument("RhoScheme: grid must be nonempty");
      for (std::size_t j = 0; j < grid.size(); ++j) {
        if (!(grid[j] > 0.0)) throw std::invalid_argument("RhoScheme: grid points must be positive");
        if (j > 0 && !(grid[j] > grid[j - 1]))
          throw std::invalid_argument("RhoScheme: grid must be strictly ascending");
      }
      break;
  }
}

std::vector<double> default_rho_grid() {
  std::vector<double> grid;
  for (double v = 0.01; v <= 150.0 + 1e-9; v += 0.5) grid.push_back(v);
  return grid;
}

void SamplerConfig::validate(const MultiViewData& data) const {
  if (iterations < 1) throw std::invalid_argument("SamplerConfig: iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations)
    throw std::invalid_argument("SamplerConfig: need 0 <= burn_in < iterations");
  if (thin < 1) throw std::invalid_argument("SamplerConfig: thin must be at least 1");
  if (num_views() < 2) throw std::invalid_argument("SamplerConfig: need at least two views");
  if (static_cast<int>(gamma.size()) != num_views())
    throw std::invalid_argument("SamplerConfig: one gamma per view required");
  if (num_views() != data.num_views())
    throw std::invalid_argument("SamplerConfig: view count differs from data");
  for (int l : L)
    if (l < 1) throw std::invalid_argument("SamplerConfig: L must be at least 1");
  for (double g : gamma)
    if (!(g > 0.0)) throw std::invalid_argument("SamplerConfig: gamma must be positive");
  rho.validate();
  if (!labels.view_order.empty()) {
    if (static_cast<int>(labels.view_order.size()) != num_views())
      throw std::invalid_argument("SamplerConfig: view_order must list every view");
    std::vector<bool> seen(num_views(), false);
    for (int v : labels.view_order) {
      if (v < 0 || v >= num_views() || seen[v])
        throw std::invalid_argument("SamplerConfig: view_order must be a permutation");
      seen[v] = true;
    }
  }
  if (kernels.empty()) {
    if (!flat_likelihood)
      throw std::invalid_argument("SamplerConfig: kernels required unless flat_likelihood");
    return;
  }
  if (static_cast<int>(kernels.size()) != num_views())
    throw std::invalid_argument("SamplerConfig: one kernel per view required");
  for (int v = 0; v < num_views(); ++v) {
    const ViewKernel& k = kernels[v];
    if (k.type == ViewKernel::Type::gaussian) {
      k.gauss.validate();
      if (k.gauss.dim != data.dim[v])
        throw std::invalid_argument("SamplerConfig: gaussian kernel dim differs from data");
    } else {
      k.reg.validate();
      int cv = k.reg.covariate_view;
      if (cv >= num_views() || cv == v)
        throw std::invalid_argument("SamplerConfig: regression covariate_view out of range");
      if (data.dim[v] != 1 || data.dim[cv] != 1)
        throw std::invalid_argument("SamplerConfig: regression views must be one-dimensional");
      if (kernels[cv].type != ViewKernel::Type::gaussian)
        throw std::invalid_argument("SamplerConfig: regression covariate view must be gaussian");
    }
  }
}

long long ChainState::cell_index(const std::vector<int>& L,
                                 const std::vector<int>& component) const {
  long long idx = 0;
  for (std::size_t v = 0; v < L.size(); ++v) idx = idx * L[v] + component[v];
  return idx;
}

int PosteriorTrace::pair_column(int v, int w, int num_views) {
  if (v > w) std::swap(v, w);
  int col = 0;
  for (int u = 0; u < v; ++u) col += num_views - 1 - u;
  return col + (w - v - 1);
}

ChainState init_state(const MultiViewData& data, const SamplerConfig& config, Rng& rng) {
  data.validate();
  config.validate(data);
  const int V = config.num_views();
  const long long n = data.n;
  const std::vector<long long> strides = cell_strides(config.L);
  const std::vector<int> order = resolve_order(config);

  ChainState state;
  state.labels.assign(V, std::vector<int>(n));
  for (int v = 0; v < V; ++v)
    for (long long i = 0; i < n; ++i) state.labels[v][i] = rng.uniform_int(config.L[v]);

  state.cells.assign(product(config.L), 0);
  state.prefix.resize(V);
  long long prefix_size = 1;
  for (int s = 0; s < V; ++s) {
    prefix_size *= config.L[order[s]];
    state.prefix[s].assign(prefix_size, 0);
  }
  for (long long i = 0; i < n; ++i) touch_object(state, config, strides, order, i, +1);

  state.r_cells.resize(state.cells.size());
  for (std::size_t j = 0; j < state.cells.size(); ++j)
    state.r_cells[j] = state.cells[j] > 0 ? 1 : 0;

  state.q.resize(V);
  for (int v = 0; v < V; ++v) state.q[v].assign(config.L[v], 1.0 / config.L[v]);

  state.atoms.resize(V);
  state.precision.assign(V, 1.0);
  if (!config.kernels.empty()) {
    for (int v = 0; v < V; ++v) {
      const ViewKernel& kernel = config.kernels[v];
      if (kernel.type == ViewKernel::Type::gaussian) {
        state.atoms[v].resize(static_cast<std::size_t>(config.L[v]) * kernel.gauss.dim);
        for (int k = 0; k < config.L[v]; ++k)
          for (int d = 0; d < kernel.gauss.dim; ++d)
            state.atoms[v][static_cast<std::size_t>(k) * kernel.gauss.dim + d] =
                rng.normal(kernel.gauss.base_mean[d], kernel.gauss.base_sd);
      } else {
        state.atoms[v].resize(config.L[v]);
        for (int k = 0; k < config.L[v]; ++k)
          state.atoms[v][k] = rng.normal(kernel.reg.base_mean, kernel.reg.base_sd);
      }
    }
    for (int v = 0; v < V; ++v) {
      const ViewKernel& kernel = config.kernels[v];
      double shape = kernel.type == ViewKernel::Type::gaussian ? kernel.gauss.prec_shape
                                                               : kernel.reg.prec_shape;
      double rate = kernel.type == ViewKernel::Type::gaussian ? kernel.gauss.prec_rate
                                                              : kernel.reg.prec_rate;
      state.precision[v] = rng.gamma(shape, rate);
    }
  }

  switch (config.rho.kind) {
    case RhoScheme::Kind::fixed:
      state.rho = config.rho.fixed_value;
      break;
    case RhoScheme::Kind::gamma_prior:
      state.rho = config.rho.a / config.rho.b;
      break;
    case RhoScheme::Kind::grid:
      state.rho = config.rho.grid[config.rho.grid.size() / 2];
      break;
  }
  state.eta = 0.5;
  return state;
}

void update_labels_joint(ChainState& state, const MultiViewData& data,
                         const SamplerConfig& config, Rng& rng) {
  const int V = config.num_views();
  const long long n = data.n;
  const long long total = product(config.L);
  const std::vector<long long> strides = cell_strides(config.L);
  const std::vector<int> order = resolve_order(config);
  const std::vector<double> prior_mass = cell_prior_mass(state, config, strides, state.rho);

  std::vector<std::vector<double>> loglik(V);
  std::vector<double> log_w(total);
  std::vector<int> component(V);
  for (long long i = 0; i < n; ++i) {
    touch_object(state, config, strides, order, i, -1);
    for (int v = 0; v < V; ++v) object_view_logliks(state, data, config, i, v, loglik[v]);
    for (long long j = 0; j < total; ++j) {
      double ll = 0.0;
      for (int v = 0; v < V; ++v) ll += loglik[v][static_cast<std::size_t>((j / strides[v]) % config.L[v])];
      log_w[j] = ll + std::log(prior_mass[j] + static_cast<double>(state.cells[j]));
    }
    long long cell = rng.categorical_log(log_w);
    for (int v = 0; v < V; ++v)
      state.labels[v][i] = static_cast<int>((cell / strides[v]) % config.L[v]);
    touch_object(state, config, strides, order, i, +1);
  }
}

void update_labels_conditional(ChainState& state, const MultiViewData& data,
                               const SamplerConfig& config, Rng& rng) {
  const int V = config.num_views();
  const long long n = data.n;
  const std::vector<long long> strides = cell_strides(config.L);
  const std::vector<int> order = resolve_order(config);

  std::vector<double> loglik;
  std::vector<double> log_w;
  for (long long i = 0; i < n; ++i) {
    touch_object(state, config, strides, order, i, -1);
    long long pidx = 0;
    double q_prod = 1.0;
    for (int s = 0; s < V; ++s) {
      int v = order[s];
      object_view_logliks(state, data, config, i, v, loglik);
      log_w.resize(config.L[v]);
      long long base = pidx * config.L[v];
      for (int k = 0; k < config.L[v]; ++k)
        log_w[k] = loglik[k] + std::log(state.rho * q_prod * state.q[v][k] +
                                        static_cast<double>(state.prefix[s][base + k]));
      int k = rng.categorical_log(log_w);
      state.labels[v][i] = k;
      pidx = base + k;
      q_prod *= state.q[v][k];
    }
    touch_object(state, config, strides, order, i, +1);
  }
}

void update_aux_r(ChainState& state, const SamplerConfig& config, const LogStirlingTable& table,
                  Rng& rng) {
  const long long total = product(config.L);
  const std::vector<long long> strides = cell_strides(config.L);
  const std::vector<double> prior_mass = cell_prior_mass(state, config, strides, state.rho);
  std::vector<double> log_w;
  for (long long j = 0; j < total; ++j) {
    long long count = state.cells[j];
    if (count == 0) {
      state.r_cells[j] = 0;
      continue;
    }
    if (table.n_max() < count) throw std::invalid_argument("update_aux_r: Stirling table too small");
    double log_mass = std::log(prior_mass[j]);
    log_w.resize(count + 1);
    log_w[0] = kNegInf;  // |s(n, 0)| = 0 for occupied cells
    for (long long w = 1; w <= count; ++w)
      log_w[w] = table(static_cast<int>(count), static_cast<int>(w)) + w * log_mass;
    state.r_cells[j] = rng.categorical_log(log_w);
  }
}

void update_q(ChainState& state, const SamplerConfig& config, Rng& rng) {
  const int V = config.num_views();
  const long long total = product(config.L);
  const std::vector<long long> strides = cell_strides(config.L);
  std::vector<double> alpha;
  for (int v = 0; v < V; ++v) {
    alpha.assign(config.L[v], config.gamma[v] / config.L[v]);
    for (long long j = 0; j < total; ++j)
      alpha[static_cast<std::size_t>((j / strides[v]) % config.L[v])] +=
          static_cast<double>(state.r_cells[j]);
    rng.dirichlet(alpha, state.q[v]);
  }
}

void update_rho_escobar_west(ChainState& state, long long n, double a, double b, Rng& rng) {
  long long r = 0;
  for (long long rc : state.r_cells) r += rc;
  if (r < 1) throw std::invalid_argument("update_rho_escobar_west: total aux count must be >= 1");
  double eta = rng.beta(state.rho + 1.0, static_cast<double>(n));
  double rate = b - std::log(eta);
  double odds = (a + static_cast<double>(r) - 1.0) / (static_cast<double>(n) * rate);
  double mix = odds / (1.0 + odds);
  double shape = rng.uniform() < mix ? a + static_cast<double>(r) : a + static_cast<double>(r) - 1.0;
  state.rho = rng.gamma(shape, rate);
  state.eta = eta;
}

void update_rho_griddy(ChainState& state, long long n, const std::vector<double>& grid, Rng& rng) {
  if (grid.empty()) throw std::invalid_argument("update_rho_griddy: grid must be nonempty");
  // prod_v q_v[k_v] per cell, without the rho factor.
  const long long total = static_cast<long long>(state.cells.size());
  std::vector<double> q_prod(total, 0.0);
  {
    std::vector<int> L(state.q.size());
    for (std::size_t v = 0; v < state.q.size(); ++v) L[v] = static_cast<int>(state.q[v].size());
    const std::vector<long long> strides = cell_strides(L);
    for (long long j = 0; j < total; ++j) {
      double m = 1.0;
      for (std::size_t v = 0; v < state.q.size(); ++v)
        m *= state.q[v][static_cast<std::size_t>((j / strides[v]) % L[v])];
      q_prod[j] = m;
    }
  }
  std::vector<double> log_w(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double rho = grid[g];
    double lw = std::lgamma(rho) - std::lgamma(static_cast<double>(n) + rho);
    for (long long j = 0; j < total; ++j) {
      if (state.cells[j] == 0) continue;
      double mass = rho * q_prod[j];
      lw += std::lgamma(static_cast<double>(state.cells[j]) + mass) - std::lgamma(mass);
    }
    log_w[g] = lw;
  }
  state.rho = grid[rng.categorical_log(log_w)];
}

void update_atoms(ChainState& state, const MultiViewData& data, const SamplerConfig& config,
                  Rng& rng) {
  const int V = config.num_views();
  std::vector<std::vector<int>> members;
  for (int v = 0; v < V; ++v) {
    members.assign(config.L[v], {});
    for (long long i = 0; i < data.n; ++i)
      members[state.labels[v][i]].push_back(static_cast<int>(i));
    const ViewKernel& kernel = config.kernels[v];
    if (kernel.type == ViewKernel::Type::gaussian) {
      const int dim = data.dim[v];
      for (int k = 0; k < config.L[v]; ++k) {
        std::vector<double> atom = update_atom_gaussian(data.x[v].data(), dim, members[k],
                                                        kernel.gauss, state.precision[v], rng);
        std::copy(atom.begin(), atom.end(),
                  state.atoms[v].begin() + static_cast<std::size_t>(k) * dim);
      }
    } else {
      const double* x1 = data.x[kernel.reg.covariate_view].data();
      const double* x2 = data.x[v].data();
      for (int k = 0; k < config.L[v]; ++k)
        state.atoms[v][k] =
            update_atom_regression(x1, x2, members[k], kernel.reg, state.precision[v], rng);
    }
  }
}

void update_precisions(ChainState& state, const MultiViewData& data, const SamplerConfig& config,
                       Rng& rng) {
  const int V = config.num_views();
  for (int v = 0; v < V; ++v) {
    const ViewKernel& kernel = config.kernels[v];
    double rss = 0.0;
    if (kernel.type == ViewKernel::Type::gaussian) {
      const int dim = data.dim[v];
      for (long long i = 0; i < data.n; ++i) {
        const double* x = data.row(v, i);
        const double* atom =
            state.atoms[v].data() + static_cast<std::size_t>(state.labels[v][i]) * dim;
        for (int d = 0; d < dim; ++d) {
          double dev = x[d] - atom[d];
          rss += dev * dev;
        }
      }
      state.precision[v] =
          update_precision(rss, data.n, dim, kernel.gauss.prec_shape, kernel.gauss.prec_rate, rng);
    } else {
      const double* x1 = data.x[kernel.reg.covariate_view].data();
      const double* x2 = data.x[v].data();
      for (long long i = 0; i < data.n; ++i) {
        double dev = x2[i] - state.atoms[v][state.labels[v][i]] * x1[i];
        rss += dev * dev;
      }
      state.precision[v] =
          update_precision(rss, data.n, 1, kernel.reg.prec_shape, kernel.reg.prec_rate, rng);
    }
  }
}

PosteriorTrace run_chain(const MultiViewData& data, const SamplerConfig& config) {
  data.validate();
  config.validate(data);
  const auto start = std::chrono::steady_clock::now();
  const int V = config.num_views();
  Rng rng(config.seed);
  ChainState state = init_state(data, config, rng);
  LogStirlingTable table(static_cast<int>(data.n));
  const bool update_parameters = !config.kernels.empty() && !config.flat_likelihood;

  PosteriorTrace trace;
  trace.n = data.n;
  trace.num_views = V;
  trace.L = config.L;
  trace.config = config;
  const long long kept = (config.iterations - config.burn_in) / config.thin;
  trace.labels.reserve(kept);
  trace.rho.reserve(kept);
  trace.rand_pairs.reserve(kept);
  trace.k.reserve(kept);

  std::vector<Labels> canon(V);
  for (int t = 0; t < config.iterations; ++t) {
    if (config.labels.kind == LabelScheme::Kind::joint)
      update_labels_joint(state, data, config, rng);
    else
      update_labels_conditional(state, data, config, rng);
    update_aux_r(state, config, table, rng);
    update_q(state, config, rng);
    switch (config.rho.kind) {
      case RhoScheme::Kind::fixed:
        break;
      case RhoScheme::Kind::gamma_prior:
        update_rho_escobar_west(state, data.n, config.rho.a, config.rho.b, rng);
        break;
      case RhoScheme::Kind::grid:
        update_rho_griddy(state, data.n, config.rho.grid, rng);
        break;
    }
    if (update_parameters) {
      update_atoms(state, data, config, rng);
      update_precisions(state, data, config, rng);
    }
    if (t < config.burn_in || (t - config.burn_in + 1) % config.thin != 0) continue;
    for (int v = 0; v < V; ++v) canon[v] = canonicalize(state.labels[v]);
    trace.labels.push_back(canon);
    trace.rho.push_back(state.rho);
    std::vector<double> rands(V * (V - 1) / 2);
    for (int v = 0; v < V; ++v)
      for (int w = v + 1; w < V; ++w)
        rands[PosteriorTrace::pair_column(v, w, V)] = rand_index(canon[v], canon[w]);
    trace.rand_pairs.push_back(std::move(rands));
    std::vector<int> ks(V);
    for (int v = 0; v < V; ++v) ks[v] = num_clusters(canon[v]);
    trace.k.push_back(std::move(ks));
  }
  trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

std::vector<double> object_cell_probs_joint(const ChainState& state, const MultiViewData& data,
                                            const SamplerConfig& config, long long i) {
  const int V = config.num_views();
  const long long total = product(config.L);
  const std::vector<long long> strides = cell_strides(config.L);
  const std::vector<int> order = resolve_order(config);
  ChainState st = state;
  touch_object(st, config, strides, order, i, -1);
  const std::vector<double> prior_mass = cell_prior_mass(st, config, strides, st.rho);

  std::vector<std::vector<double>> loglik(V);
  for (int v = 0; v < V; ++v) object_view_logliks(st, data, config, i, v, loglik[v]);
  std::vector<double> log_w(total);
  double max_log = kNegInf;
  for (long long j = 0; j < total; ++j) {
    double ll = 0.0;
    for (int v = 0; v < V; ++v) ll += loglik[v][static_cast<std::size_t>((j / strides[v]) % config.L[v])];
    log_w[j] = ll + std::log(prior_mass[j] + static_cast<double>(st.cells[j]));
    max_log = std::max(max_log, log_w[j]);
  }
  double sum = 0.0;
  for (long long j = 0; j < total; ++j) {
    log_w[j] = std::exp(log_w[j] - max_log);
    sum += log_w[j];
  }
  for (long long j = 0; j < total; ++j) log_w[j] /= sum;
  return log_w;
}

std::vector<double> object_cell_probs_conditional(const ChainState& state,
                                                  const MultiViewData& data,
                                                  const SamplerConfig& config, long long i) {
  const int V = config.num_views();
  const long long total = product(config.L);
  const std::vector<long long> strides = cell_strides(config.L);
  const std::vector<int> order = resolve_order(config);
  ChainState st = state;
  touch_object(st, config, strides, order, i, -1);

  // Walk stages in the configured order, expanding the probability of each
  // prefix by the normalized stage weights.
  std::vector<double> probs{1.0};
  std::vector<double> q_prod{1.0};
  std::vector<double> loglik, stage_w;
  for (int s = 0; s < V; ++s) {
    int v = order[s];
    object_view_logliks(st, data, config, i, v, loglik);
    std::vector<double> next_probs(probs.size() * config.L[v]);
    std::vector<double> next_q(probs.size() * config.L[v]);
    stage_w.resize(config.L[v]);
    for (std::size_t p = 0; p < probs.size(); ++p) {
      long long base = static_cast<long long>(p) * config.L[v];
      double max_log = kNegInf;
      for (int k = 0; k < config.L[v]; ++k) {
        stage_w[k] = loglik[k] + std::log(st.rho * q_prod[p] * st.q[v][k] +
                                          static_cast<double>(st.prefix[s][base + k]));
        max_log = std::max(max_log, stage_w[k]);
      }
      double sum = 0.0;
      for (int k = 0; k < config.L[v]; ++k) {
        stage_w[k] = std::exp(stage_w[k] - max_log);
        sum += stage_w[k];
      }
      for (int k = 0; k < config.L[v]; ++k) {
        next_probs[base + k] = probs[p] * stage_w[k] / sum;
        next_q[base + k] = q_prod[p] * st.q[v][k];
      }
    }
    probs = std::move(next_probs);
    q_prod = std::move(next_q);
  }

  // Map from the stage-order prefix indexing back to the flat cell grid.
  std::vector<double> out(total, 0.0);
  for (long long p = 0; p < total; ++p) {
    long long rest = p;
    long long cell = 0;
    for (int s = V - 1; s >= 0; --s) {
      int v = order[s];
      cell += (rest % config.L[v]) * strides[v];
      rest /= config.L[v];
    }
    out[cell] = probs[p];
  }
  return out;
}

void validate_state(const ChainState& state, const MultiViewData& data,
                    const SamplerConfig& config) {
  const int V = config.num_views();
  const long long n = data.n;
  const long long total = product(config.L);
  const std::vector<long long> strides = cell_strides(config.L);
  const std::vector<int> order = resolve_order(config);

  if (static_cast<int>(state.labels.size()) != V) throw std::logic_error("labels: wrong view count");
  for (int v = 0; v < V; ++v) {
    if (static_cast<long long>(state.labels[v].size()) != n)
      throw std::logic_error("labels: wrong object count");
    for (long long i = 0; i < n; ++i)
      if (state.labels[v][i] < 0 || state.labels[v][i] >= config.L[v])
        throw std::logic_error("labels: component out of range");
  }

  std::vector<long long> cells(total, 0);
  std::vector<std::vector<long long>> prefix(V);
  long long prefix_size = 1;
  for (int s = 0; s < V; ++s) {
    prefix_size *= config.L[order[s]];
    prefix[s].assign(prefix_size, 0);
  }
  for (long long i = 0; i < n; ++i) {
    long long cell = 0;
    for (int v = 0; v < V; ++v) cell += static_cast<long long>(state.labels[v][i]) * strides[v];
    ++cells[cell];
    long long pidx = 0;
    for (int s = 0; s < V; ++s) {
      pidx = pidx * config.L[order[s]] + state.labels[order[s]][i];
      ++prefix[s][pidx];
    }
  }
  if (state.cells != cells) throw std::logic_error("cells: cached counts differ from labels");
  if (state.prefix.size() != prefix.size()) throw std::logic_error("prefix: wrong stage count");
  for (int s = 0; s < V; ++s)
    if (state.prefix[s] != prefix[s]) throw std::logic_error("prefix: cached margin differs");

  if (static_cast<long long>(state.r_cells.size()) != total)
    throw std::logic_error("r_cells: wrong size");
  for (long long j = 0; j < total; ++j) {
    if (state.r_cells[j] < 0 || state.r_cells[j] > state.cells[j])
      throw std::logic_error("r_cells: value outside [0, n_cell]");
    if (state.cells[j] > 0 && state.r_cells[j] < 1)
      throw std::logic_error("r_cells: occupied cell with zero aux count");
  }

  if (static_cast<int>(state.q.size()) != V) throw std::logic_error("q: wrong view count");
  for (int v = 0; v < V; ++v) {
    if (static_cast<int>(state.q[v].size()) != config.L[v])
      throw std::logic_error("q: wrong component count");
    double sum = 0.0;
    for (double qk : state.q[v]) {
      if (!(qk >= 0.0)) throw std::logic_error("q: negative entry");
      sum += qk;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::logic_error("q: does not sum to 1");
  }

  if (!(state.rho > 0.0)) throw std::logic_error("rho: must be positive");
  if (!(state.eta > 0.0 && state.eta < 1.0)) throw std::logic_error("eta: must lie in (0,1)");
  if (!config.kernels.empty()) {
    for (int v = 0; v < V; ++v) {
      std::size_t expect = config.kernels[v].type == ViewKernel::Type::gaussian
                               ? static_cast<std::size_t>(config.L[v]) * data.dim[v]
                               : static_cast<std::size_t>(config.L[v]);
      if (state.atoms[v].size() != expect) throw std::logic_error("atoms: wrong size");
      if (!(state.precision[v] > 0.0)) throw std::logic_error("precision: must be positive");
    }
  }
}

}  // namespace clic
