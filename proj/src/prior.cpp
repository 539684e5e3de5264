#include "clic/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace clic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp accumulator; adds terms in call order, so a fixed
// iteration order gives a fixed result.
struct LogSum {
  double max_term = kNegInf;
  double sum = 0.0;  // sum of exp(term - max_term)

  void add(double term) {
    if (term == kNegInf) return;
    if (term <= max_term) {
      sum += std::exp(term - max_term);
    } else {
      sum = sum * std::exp(max_term - term) + 1.0;
      max_term = term;
    }
  }

  double value() const { return max_term == kNegInf ? kNegInf : max_term + std::log(sum); }
};

// ln((m-1)!) for m = 0..n; the m = 0 slot is unused filler.
std::vector<double> log_factorials_shifted(long long n) {
  std::vector<double> f(static_cast<std::size_t>(n) + 1, 0.0);
  for (long long m = 2; m <= n; ++m) f[m] = f[m - 1] + std::log(static_cast<double>(m - 1));
  return f;
}

}  // namespace

void ClicParams::validate() const {
  if (num_views() < 2) throw std::invalid_argument("ClicParams: need at least two views");
  if (!(rho > 0.0)) throw std::invalid_argument("ClicParams: rho must be positive");
  for (double g : gamma)
    if (!(g > 0.0)) throw std::invalid_argument("ClicParams: gamma must be positive");
}

void FiniteApproxParams::validate() const {
  hp.validate();
  if (static_cast<int>(L.size()) != hp.num_views())
    throw std::invalid_argument("FiniteApproxParams: one L per view required");
  for (int l : L)
    if (l < 1) throw std::invalid_argument("FiniteApproxParams: L must be at least 1");
}

double crp_log_pmf(const Labels& c, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("crp_log_pmf: gamma must be positive");
  std::vector<long long> sizes = cluster_sizes(c);
  long long n = static_cast<long long>(c.size());
  double value = static_cast<double>(sizes.size()) * std::log(gamma) - log_rising_factorial(gamma, n);
  for (long long m : sizes) value += std::lgamma(static_cast<double>(m));
  return value;
}

namespace {

// Shared setup for the exact joint PMF sum: per occupied cell its count,
// row, column, and the log Stirling row; plus integer factorial and rising
// factorial tables so the inner loop is pure lookups.
struct MeppfWork {
  long long n = 0;
  int K1 = 0, K2 = 0;
  std::vector<int> cell_n, cell_row, cell_col;
  std::vector<std::vector<double>> stir;      // [cell][w], w = 0..cell_n
  std::vector<double> lfac;                   // ln((m-1)!)
  std::vector<double> lrf1, lrf2;             // log rising factorials of gamma at r = 0..n
  double log_rho = 0.0;
  double constant = 0.0;                      // K1 ln g1 + K2 ln g2 - (rho)^(n)
  long long total_combos = 1;
};

MeppfWork meppf_setup(const Labels& c1, const Labels& c2, const ClicParams& hp) {
  hp.validate();
  if (hp.num_views() != 2)
    throw std::invalid_argument("clic_log_meppf: exactly two views (use pairwise parameters)");
  ContingencyTable t = contingency(c1, c2);
  MeppfWork w;
  w.n = t.n;
  w.K1 = t.K1;
  w.K2 = t.K2;
  double combos = 1.0;
  for (int k1 = 0; k1 < t.K1; ++k1) {
    for (int k2 = 0; k2 < t.K2; ++k2) {
      long long cnt = t.at(k1, k2);
      if (cnt == 0) continue;
      w.cell_n.push_back(static_cast<int>(cnt));
      w.cell_row.push_back(k1);
      w.cell_col.push_back(k2);
      combos *= static_cast<double>(cnt);
    }
  }
  if (combos > 1e7)
    throw std::runtime_error(
        "clic_log_meppf: auxiliary sum too large (cell-count product exceeds 1e7); "
        "use the Monte Carlo samplers instead");
  w.total_combos = static_cast<long long>(combos);
  LogStirlingTable table(static_cast<int>(w.n));
  for (std::size_t j = 0; j < w.cell_n.size(); ++j) {
    std::vector<double> row(static_cast<std::size_t>(w.cell_n[j]) + 1);
    for (int m = 0; m <= w.cell_n[j]; ++m) row[m] = table(w.cell_n[j], m);
    w.stir.push_back(std::move(row));
  }
  w.lfac = log_factorials_shifted(w.n);
  w.lrf1.resize(w.n + 1);
  w.lrf2.resize(w.n + 1);
  for (long long r = 0; r <= w.n; ++r) {
    w.lrf1[r] = log_rising_factorial(hp.gamma[0], r);
    w.lrf2[r] = log_rising_factorial(hp.gamma[1], r);
  }
  w.log_rho = std::log(hp.rho);
  w.constant = w.K1 * std::log(hp.gamma[0]) + w.K2 * std::log(hp.gamma[1]) -
               log_rising_factorial(hp.rho, w.n);
  return w;
}

// One auxiliary-matrix term: digits[j] = r for cell j.
double meppf_term(const MeppfWork& w, const std::vector<int>& digits, std::vector<long long>& row_r,
                  std::vector<long long>& col_r) {
  std::fill(row_r.begin(), row_r.end(), 0);
  std::fill(col_r.begin(), col_r.end(), 0);
  long long r = 0;
  double stir_sum = 0.0;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    int rj = digits[j];
    r += rj;
    row_r[w.cell_row[j]] += rj;
    col_r[w.cell_col[j]] += rj;
    stir_sum += w.stir[j][rj];
  }
  double term = static_cast<double>(r) * w.log_rho - w.lrf1[r] - w.lrf2[r] + stir_sum;
  for (long long m : row_r) term += w.lfac[m];
  for (long long m : col_r) term += w.lfac[m];
  return term;
}

// Decode a flat combination index into digits (cell j cycles fastest for
// j = last), each digit in 1..cell_n[j].
void decode_combo(const MeppfWork& w, long long index, std::vector<int>& digits) {
  for (std::size_t j = w.cell_n.size(); j-- > 0;) {
    digits[j] = 1 + static_cast<int>(index % w.cell_n[j]);
    index /= w.cell_n[j];
  }
}

// Advance the odometer by one step; digits[j] in 1..cell_n[j].
void next_combo(const MeppfWork& w, std::vector<int>& digits) {
  for (std::size_t j = w.cell_n.size(); j-- > 0;) {
    if (digits[j] < w.cell_n[j]) {
      ++digits[j];
      return;
    }
    digits[j] = 1;
  }
}

double meppf_sum_range(const MeppfWork& w, long long begin, long long end) {
  std::vector<int> digits(w.cell_n.size());
  std::vector<long long> row_r(w.K1), col_r(w.K2);
  decode_combo(w, begin, digits);
  LogSum acc;
  for (long long idx = begin; idx < end; ++idx) {
    acc.add(meppf_term(w, digits, row_r, col_r));
    next_combo(w, digits);
  }
  return acc.value();
}

}  // namespace

double clic_log_meppf(const Labels& c1, const Labels& c2, const ClicParams& hp, Exec exec) {
  MeppfWork w = meppf_setup(c1, c2, hp);
  const long long total = w.total_combos;
  double log_sum;
  if (exec == Exec::serial || total < (1 << 15)) {
    log_sum = meppf_sum_range(w, 0, total);
  } else {
    const long long block = 1 << 14;
    const long long num_blocks = (total + block - 1) / block;
    std::vector<double> partial(num_blocks);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < num_blocks; ++b) {
      long long begin = b * block;
      long long end = std::min(total, begin + block);
      partial[b] = meppf_sum_range(w, begin, end);
    }
    LogSum acc;
    for (double p : partial) acc.add(p);  // fixed block order
    log_sum = acc.value();
  }
  return w.constant + log_sum;
}

double marginal_log_eppf(const Labels& c, double rho, double gamma) {
  if (!(rho > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("marginal_log_eppf: hyperparameters must be positive");
  std::vector<long long> sizes = cluster_sizes(c);
  long long n = static_cast<long long>(c.size());
  double combos = 1.0;
  for (long long m : sizes) combos *= static_cast<double>(m);
  if (combos > 1e7)
    throw std::runtime_error(
        "marginal_log_eppf: auxiliary sum too large (cluster-size product exceeds 1e7)");
  LogStirlingTable table(static_cast<int>(n));
  std::vector<double> lfac = log_factorials_shifted(n);
  std::vector<double> lrf(n + 1);
  for (long long r = 0; r <= n; ++r) lrf[r] = log_rising_factorial(gamma, r);
  const double log_rho = std::log(rho);
  const int K = static_cast<int>(sizes.size());

  std::vector<int> digits(K, 1);
  LogSum acc;
  while (true) {
    long long r = 0;
    double term = 0.0;
    for (int k = 0; k < K; ++k) {
      r += digits[k];
      term += lfac[digits[k]] + table(static_cast<int>(sizes[k]), digits[k]);
    }
    term += static_cast<double>(r) * log_rho - lrf[r];
    acc.add(term);
    int k = K - 1;
    while (k >= 0 && digits[k] == sizes[k]) {
      digits[k] = 1;
      --k;
    }
    if (k < 0) break;
    ++digits[k];
  }
  return K * std::log(gamma) - log_rising_factorial(rho, n) + acc.value();
}

namespace {

// ln P(root partition has w clusters) under a CRP(rho) on n objects:
// |s(n, w)| rho^w / (rho)^(n).
double log_root_count_pmf(int w, int n, double rho, const LogStirlingTable& table) {
  return table(n, w) + w * std::log(rho) - log_rising_factorial(rho, n);
}

}  // namespace

double prior_k_pmf(int n, int m, double rho, double gamma, const LogStirlingTable& table) {
  if (n < 1) throw std::invalid_argument("prior_k_pmf: n must be at least 1");
  if (!(rho > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("prior_k_pmf: hyperparameters must be positive");
  if (table.n_max() < n) throw std::invalid_argument("prior_k_pmf: Stirling table too small");
  if (m < 1 || m > n) return 0.0;
  LogSum acc;
  double log_gamma = std::log(gamma);
  for (int w = m; w <= n; ++w) {
    // Root clusters merge per view: given w root clusters, the view's count
    // follows the CRP(gamma) law on w items, |s(w, m)| gamma^m / (gamma)^(w).
    double antoniak = table(w, m) + m * log_gamma - log_rising_factorial(gamma, w);
    acc.add(log_root_count_pmf(w, n, rho, table) + antoniak);
  }
  return std::exp(acc.value());
}

double independent_crp_rand(double gamma1, double gamma2) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    throw std::invalid_argument("independent_crp_rand: gamma must be positive");
  return (1.0 + gamma1 * gamma2) / ((gamma1 + 1.0) * (gamma2 + 1.0));
}

double expected_rand_infinite(const ClicParams& hp) {
  hp.validate();
  if (hp.num_views() != 2)
    throw std::invalid_argument("expected_rand_infinite: exactly two views");
  double nu = 1.0 / (hp.rho + 1.0);
  return nu + (1.0 - nu) * independent_crp_rand(hp.gamma[0], hp.gamma[1]);
}

double expected_rand_finite(const FiniteApproxParams& fp) {
  fp.validate();
  if (fp.hp.num_views() != 2)
    throw std::invalid_argument("expected_rand_finite: exactly two views");
  if (fp.hp.gamma[0] != fp.hp.gamma[1])
    throw std::invalid_argument("expected_rand_finite: requires equal gamma across views");
  double g = fp.hp.gamma[0];
  double inv1 = 1.0 / fp.L[0];
  double inv2 = 1.0 / fp.L[1];
  double a1 = (1.0 - inv1) / (g + 1.0) + inv1;
  double a2 = (1.0 - inv2) / (g + 1.0) + inv2;
  double kappa = a1 * a2 + (1.0 - inv1) * (1.0 - inv2) * g * g / ((g + 1.0) * (g + 1.0));
  double nu = 1.0 / (fp.hp.rho + 1.0);
  return nu + (1.0 - nu) * kappa;
}

std::vector<Labels> sample_urn(int n, const ClicParams& hp, Rng& rng) {
  hp.validate();
  if (n < 1) throw std::invalid_argument("sample_urn: n must be at least 1");
  const int V = hp.num_views();
  struct Cell {
    std::vector<int> key;
    long long count;
  };
  std::vector<Cell> cells;
  std::vector<std::vector<long long>> atom_count(V);  // independent-draw counts per atom
  long long independent_draws = 0;
  std::vector<std::vector<int>> assigned(V, std::vector<int>(n));

  std::vector<int> key(V);
  for (int i = 0; i < n; ++i) {
    // Existing view-combination with weight equal to its occupancy, fresh
    // independent pick with weight rho.
    double u = rng.uniform() * (hp.rho + static_cast<double>(i));
    double acc = 0.0;
    int chosen = -1;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      acc += static_cast<double>(cells[j].count);
      if (u < acc) {
        chosen = static_cast<int>(j);
        break;
      }
    }
    if (chosen >= 0) {
      ++cells[chosen].count;
      for (int v = 0; v < V; ++v) assigned[v][i] = cells[chosen].key[v];
      continue;
    }
    // Independent pick: each view draws from its own urn over
    // independent-draw counts, opening a new atom with weight gamma[v].
    for (int v = 0; v < V; ++v) {
      double uv = rng.uniform() * (hp.gamma[v] + static_cast<double>(independent_draws));
      double av = 0.0;
      int atom = -1;
      for (std::size_t k = 0; k < atom_count[v].size(); ++k) {
        av += static_cast<double>(atom_count[v][k]);
        if (uv < av) {
          atom = static_cast<int>(k);
          break;
        }
      }
      if (atom < 0) {
        atom = static_cast<int>(atom_count[v].size());
        atom_count[v].push_back(0);
      }
      ++atom_count[v][atom];
      key[v] = atom;
      assigned[v][i] = atom;
    }
    ++independent_draws;
    bool found = false;
    for (auto& cell : cells) {
      if (cell.key == key) {
        ++cell.count;
        found = true;
        break;
      }
    }
    if (!found) cells.push_back({key, 1});
  }

  std::vector<Labels> out(V);
  for (int v = 0; v < V; ++v) out[v] = canonicalize(assigned[v]);
  return out;
}

std::vector<Labels> sample_finite_prior(int n, const FiniteApproxParams& fp, Rng& rng) {
  fp.validate();
  if (n < 1) throw std::invalid_argument("sample_finite_prior: n must be at least 1");
  const int V = fp.hp.num_views();
  long long total = 1;
  for (int v = 0; v < V; ++v) total *= fp.L[v];

  std::vector<std::vector<double>> q(V);
  std::vector<double> alpha;
  for (int v = 0; v < V; ++v) {
    alpha.assign(fp.L[v], fp.hp.gamma[v] / fp.L[v]);
    rng.dirichlet(alpha, q[v]);
  }

  // Cell weights p ~ Dirichlet(rho * outer(q_1, ..., q_V)), drawn as
  // normalized Gamma variates in log space. Margin weights can underflow to
  // exactly zero for large L (tiny gamma/L concentrations), in which case the
  // cell's true concentration sits below double range and its weight is zero
  // to working precision, so skip the draw instead of feeding Gamma a zero
  // shape. The largest cell concentration is at least rho / (L_1 ... L_V),
  // so at least one cell always keeps positive weight.
  std::vector<double> log_w(total);
  double max_log = -std::numeric_limits<double>::infinity();
  for (long long cell = 0; cell < total; ++cell) {
    double a = fp.hp.rho;
    long long rest = cell;
    for (int v = V - 1; v >= 0; --v) {
      a *= q[v][rest % fp.L[v]];
      rest /= fp.L[v];
    }
    log_w[cell] = a > 0.0 ? rng.log_gamma_draw(a) : -std::numeric_limits<double>::infinity();
    if (log_w[cell] > max_log) max_log = log_w[cell];
  }
  std::vector<double> cumulative(total);
  double run = 0.0;
  for (long long cell = 0; cell < total; ++cell) {
    run += std::exp(log_w[cell] - max_log);
    cumulative[cell] = run;
  }

  std::vector<std::vector<int>> assigned(V, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform() * run;
    long long cell =
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    if (cell >= total) cell = total - 1;
    for (int v = V - 1; v >= 0; --v) {
      assigned[v][i] = static_cast<int>(cell % fp.L[v]);
      cell /= fp.L[v];
    }
  }

  std::vector<Labels> out(V);
  for (int v = 0; v < V; ++v) out[v] = canonicalize(assigned[v]);
  return out;
}

namespace {

// Shared Monte Carlo loop: draw d uses stream (seed, d); per-draw results go
// into flat arrays and are reduced afterward in draw order, so thread count
// cannot change the output.
template <typename DrawFn>
PriorMcStats prior_mc(int n, int num_views, long long num_draws, std::uint64_t seed, Exec exec,
                      DrawFn draw) {
  if (n < 2) throw std::invalid_argument("prior Monte Carlo: n must be at least 2");
  if (num_draws < 1) throw std::invalid_argument("prior Monte Carlo: need at least one draw");
  const int V = num_views;
  const int P = V * (V - 1) / 2;
  std::vector<double> rand_values(static_cast<std::size_t>(num_draws) * P);
  std::vector<int> k_values(static_cast<std::size_t>(num_draws) * V);

#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long long d = 0; d < num_draws; ++d) {
    Rng rng(seed, static_cast<std::uint64_t>(d));
    std::vector<Labels> parts = draw(rng);
    int col = 0;
    for (int v = 0; v < V; ++v) {
      for (int w = v + 1; w < V; ++w) {
        rand_values[static_cast<std::size_t>(d) * P + col] = rand_index(parts[v], parts[w]);
        ++col;
      }
    }
    for (int v = 0; v < V; ++v)
      k_values[static_cast<std::size_t>(d) * V + v] = num_clusters(parts[v]);
  }

  PriorMcStats stats;
  stats.num_draws = num_draws;
  stats.rand_mean.assign(P, 0.0);
  stats.rand_se.assign(P, 0.0);
  stats.k_counts.assign(V, std::vector<long long>(n, 0));
  for (long long d = 0; d < num_draws; ++d) {
    for (int p = 0; p < P; ++p)
      stats.rand_mean[p] += rand_values[static_cast<std::size_t>(d) * P + p];
    for (int v = 0; v < V; ++v)
      ++stats.k_counts[v][k_values[static_cast<std::size_t>(d) * V + v] - 1];
  }
  for (int p = 0; p < P; ++p) stats.rand_mean[p] /= static_cast<double>(num_draws);
  for (long long d = 0; d < num_draws; ++d) {
    for (int p = 0; p < P; ++p) {
      double dev = rand_values[static_cast<std::size_t>(d) * P + p] - stats.rand_mean[p];
      stats.rand_se[p] += dev * dev;
    }
  }
  for (int p = 0; p < P; ++p) {
    double var = stats.rand_se[p] / static_cast<double>(num_draws - 1);
    stats.rand_se[p] = std::sqrt(var / static_cast<double>(num_draws));
  }
  return stats;
}

}  // namespace

PriorMcStats urn_mc(int n, const ClicParams& hp, long long num_draws, std::uint64_t seed,
                    Exec exec) {
  hp.validate();
  return prior_mc(n, hp.num_views(), num_draws, seed, exec,
                  [&](Rng& rng) { return sample_urn(n, hp, rng); });
}

PriorMcStats finite_prior_mc(int n, const FiniteApproxParams& fp, long long num_draws,
                             std::uint64_t seed, Exec exec) {
  fp.validate();
  return prior_mc(n, fp.hp.num_views(), num_draws, seed, exec,
                  [&](Rng& rng) { return sample_finite_prior(n, fp, rng); });
}

}  // namespace clic
