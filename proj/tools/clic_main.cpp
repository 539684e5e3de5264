// Command-line surface for the CLIC/PCDP library: synthetic data generation,
// Gibbs sampler runs, trace summaries, and the ground-truth check battery.
// Exit codes: 0 success, 1 runtime or data error, 2 usage error.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "clic/csv.hpp"
#include "clic/inference.hpp"
#include "clic/oracle.hpp"
#include "clic/partitions.hpp"
#include "clic/prior.hpp"
#include "clic/rng.hpp"
#include "clic/sampler.hpp"
#include "clic/simulate.hpp"
#include "clic/stats.hpp"

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream stream(s);
  while (std::getline(stream, part, sep)) parts.push_back(part);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("cannot parse " + what + " from '" + s + "'");
  }
}

long long to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("cannot parse " + what + " from '" + s + "'");
  }
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
  std::vector<double> values;
  for (const std::string& part : split(s, ',')) values.push_back(to_double(trim(part), what));
  return values;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> values;
  for (const std::string& part : split(s, ','))
    values.push_back(static_cast<int>(to_int(trim(part), what)));
  return values;
}

// "fixed:v", "gamma:a,b", or "grid:lo:hi:step".
clic::RhoScheme parse_rho(const std::string& spec) {
  std::size_t colon = spec.find(':');
  std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "fixed") return clic::RhoScheme::Fixed(to_double(rest, "rho value"));
  if (kind == "gamma") {
    std::vector<double> ab = parse_double_list(rest, "rho prior");
    if (ab.size() != 2) throw std::runtime_error("rho gamma prior needs two values: gamma:a,b");
    return clic::RhoScheme::GammaPrior(ab[0], ab[1]);
  }
  if (kind == "grid") {
    std::vector<std::string> parts = split(rest, ':');
    if (parts.size() != 3) throw std::runtime_error("rho grid needs grid:lo:hi:step");
    double lo = to_double(parts[0], "grid lo");
    double hi = to_double(parts[1], "grid hi");
    double step = to_double(parts[2], "grid step");
    if (!(step > 0.0) || !(hi >= lo)) throw std::runtime_error("rho grid must ascend");
    std::vector<double> points;
    for (double v = lo; v <= hi + 1e-9; v += step) points.push_back(v);
    return clic::RhoScheme::Grid(std::move(points));
  }
  throw std::runtime_error("unknown rho scheme '" + kind + "' (fixed:|gamma:|grid:)");
}

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buffer;
}

void write_meta(const fs::path& dir, double wall_seconds) {
  std::map<std::string, std::string> meta;
  meta["timestamp"] = timestamp_utc();
  std::ostringstream wall;
  wall << wall_seconds;
  meta["wall_seconds"] = wall.str();
  meta["manifest_hash"] = clic::file_hash_hex((dir / "manifest.txt").string());
  clic::write_manifest((dir / "meta.txt").string(), meta);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string scenario;
  int case_id = 1;
  double eta2 = 0.2;
  long long n = 200;
  int d2 = 2;
  std::uint64_t seed = 1;
  std::string out = "sim_out";
};

int cmd_simulate(const SimulateOptions& opt) {
  clic::Rng rng(opt.seed);
  clic::SyntheticDataset dataset;
  if (opt.scenario == "two-view")
    dataset = clic::gen_two_view(opt.case_id, opt.eta2, opt.n, rng);
  else if (opt.scenario == "three-view")
    dataset = clic::gen_three_view(opt.n, rng);
  else if (opt.scenario == "varying")
    dataset = clic::gen_varying(opt.n, opt.d2, rng);
  else
    dataset = clic::gen_correlated(opt.case_id, opt.eta2, opt.n, rng);

  fs::create_directories(opt.out);
  const fs::path dir(opt.out);
  const int V = dataset.data.num_views();
  std::map<std::string, std::string> manifest;
  manifest["command"] = "simulate";
  manifest["scenario"] = dataset.scenario;
  manifest["n"] = std::to_string(dataset.data.n);
  manifest["seed"] = std::to_string(opt.seed);
  manifest["views"] = std::to_string(V);
  for (int v = 0; v < V; ++v) {
    const int dim = dataset.data.dim[v];
    std::vector<std::string> header(dim);
    for (int d = 0; d < dim; ++d) header[d] = "x" + std::to_string(d + 1);
    std::vector<std::vector<double>> rows(dataset.data.n, std::vector<double>(dim));
    for (long long i = 0; i < dataset.data.n; ++i)
      for (int d = 0; d < dim; ++d) rows[i][d] = dataset.data.x[v][i * dim + d];
    std::string file = "view" + std::to_string(v + 1) + ".csv";
    clic::write_matrix_csv((dir / file).string(), rows, header);
    manifest["view" + std::to_string(v + 1) + ".file"] = file;
    manifest["view" + std::to_string(v + 1) + ".dim"] = std::to_string(dim);
  }
  clic::write_label_rows_csv((dir / "truth.csv").string(), dataset.truth);
  clic::write_manifest((dir / "manifest.txt").string(), manifest);
  write_meta(dir, 0.0);
  std::cout << "scenario = " << dataset.scenario << "\nseed = " << opt.seed
            << "\nout = " << opt.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct ViewConfig {
  std::string data;
  bool header = false;
  int dim = 0;  // 0: infer from file
  std::vector<double> base_mean;
  double base_sd = 1.0;
  double prec_shape = 1.0;
  double prec_rate = 1.0;
  int covariate = 1;  // 1-based; regression views only
};

struct RunConfig {
  int views = 2;
  std::string model = "uncorrelated";
  std::string rho = "gamma:1,1";
  std::string scheme = "conditional";
  std::vector<int> view_order;  // 1-based
  std::vector<int> L;
  std::vector<double> gamma;
  int iters = 30000;
  int burnin = 10000;
  int thin = 2;
  int chains = 1;
  std::uint64_t seed = 1;
  bool standardize = true;
  std::string out = "fit_out";
  std::vector<ViewConfig> view;
};

void apply_global_key(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "views")
    config.views = static_cast<int>(to_int(value, key));
  else if (key == "model")
    config.model = value;
  else if (key == "rho")
    config.rho = value;
  else if (key == "scheme")
    config.scheme = value;
  else if (key == "view_order")
    config.view_order = parse_int_list(value, key);
  else if (key == "L")
    config.L = parse_int_list(value, key);
  else if (key == "gamma")
    config.gamma = parse_double_list(value, key);
  else if (key == "iters")
    config.iters = static_cast<int>(to_int(value, key));
  else if (key == "burnin")
    config.burnin = static_cast<int>(to_int(value, key));
  else if (key == "thin")
    config.thin = static_cast<int>(to_int(value, key));
  else if (key == "chains")
    config.chains = static_cast<int>(to_int(value, key));
  else if (key == "seed")
    config.seed = static_cast<std::uint64_t>(to_int(value, key));
  else if (key == "standardize")
    config.standardize = to_int(value, key) != 0;
  else if (key == "out")
    config.out = value;
  else
    throw std::runtime_error("unknown config key '" + key + "'");
}

void apply_view_key(ViewConfig& view, const std::string& key, const std::string& value) {
  if (key == "data")
    view.data = value;
  else if (key == "header")
    view.header = to_int(value, key) != 0;
  else if (key == "dim")
    view.dim = static_cast<int>(to_int(value, key));
  else if (key == "base_mean")
    view.base_mean = parse_double_list(value, key);
  else if (key == "base_sd")
    view.base_sd = to_double(value, key);
  else if (key == "prec_shape")
    view.prec_shape = to_double(value, key);
  else if (key == "prec_rate")
    view.prec_rate = to_double(value, key);
  else if (key == "covariate")
    view.covariate = static_cast<int>(to_int(value, key));
  else
    throw std::runtime_error("unknown view config key '" + key + "'");
}

// Flat key = value file with optional [viewN] sections; '#' starts a comment.
void load_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  int section = -1;  // -1: global, otherwise view index
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::runtime_error("unterminated section in " + path);
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.rfind("view", 0) != 0)
        throw std::runtime_error("unknown config section '" + name + "'");
      section = static_cast<int>(to_int(name.substr(4), "view section")) - 1;
      if (section < 0) throw std::runtime_error("view sections are numbered from 1");
      if (static_cast<int>(config.view.size()) <= section) config.view.resize(section + 1);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("expected 'key = value' in " + path);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section < 0)
      apply_global_key(config, key, value);
    else
      apply_view_key(config.view[section], key, value);
  }
}

// Column-wise z-scoring; zero-variance columns are centered only.
void standardize_view(std::vector<double>& x, long long n, int dim) {
  for (int d = 0; d < dim; ++d) {
    double m = 0.0;
    for (long long i = 0; i < n; ++i) m += x[i * dim + d];
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (long long i = 0; i < n; ++i) {
      double dev = x[i * dim + d] - m;
      ss += dev * dev;
    }
    double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    double scale = sd > 1e-12 ? 1.0 / sd : 1.0;
    for (long long i = 0; i < n; ++i) x[i * dim + d] = (x[i * dim + d] - m) * scale;
  }
}

void write_summaries(const clic::PosteriorTrace& trace, const fs::path& dir) {
  const int V = trace.num_views;

  for (int v = 0; v < V; ++v) {
    std::vector<double> psm = clic::posterior_similarity(trace, v, clic::Exec::parallel);
    std::vector<std::vector<double>> rows(trace.n, std::vector<double>(trace.n));
    for (long long i = 0; i < trace.n; ++i)
      for (long long j = 0; j < trace.n; ++j) rows[i][j] = psm[i * trace.n + j];
    clic::write_matrix_csv((dir / ("psm_view" + std::to_string(v + 1) + ".csv")).string(), rows,
                           {});

    clic::Labels point = clic::minimize_vi(trace, v, clic::Exec::parallel);
    clic::write_label_rows_csv((dir / ("point_view" + std::to_string(v + 1) + ".csv")).string(),
                               {point});

    std::ofstream kf(dir / ("k_view" + std::to_string(v + 1) + ".csv"));
    kf << "k,prob\n";
    kf.precision(17);
    for (const auto& [k, prob] : clic::k_posterior(trace, v)) kf << k << ',' << prob << '\n';
  }

  std::ofstream rand_file(dir / "rand_summary.csv");
  rand_file << "pair,mean,lo,hi\n";
  rand_file.precision(17);
  std::ofstream hist_file(dir / "rand_hist.csv");
  hist_file << "pair,bin_lo,bin_hi,count\n";
  std::ofstream ess_file(dir / "ess.csv");
  ess_file << "series,ess\n";
  ess_file.precision(17);
  if (trace.num_draws() >= 10) ess_file << "rho," << clic::effective_sample_size(trace.rho) << '\n';
  for (int v = 0; v < V; ++v) {
    for (int w = v + 1; w < V; ++w) {
      clic::RandSummary summary = clic::rand_posterior_summary(trace, v, w);
      std::string pair = std::to_string(v + 1) + std::to_string(w + 1);
      rand_file << pair << ',' << summary.mean << ',' << summary.lo << ',' << summary.hi << '\n';
      const int bins = 50;
      std::vector<long long> counts(bins, 0);
      for (double r : summary.series) {
        int b = std::min(bins - 1, static_cast<int>(r * bins));
        ++counts[b];
      }
      for (int b = 0; b < bins; ++b)
        hist_file << pair << ',' << static_cast<double>(b) / bins << ','
                  << static_cast<double>(b + 1) / bins << ',' << counts[b] << '\n';
      if (trace.num_draws() >= 10)
        ess_file << "rand_" << pair << ',' << clic::effective_sample_size(summary.series) << '\n';

      std::ofstream joint_file(dir / ("joint_k_" + pair + ".csv"));
      joint_file << "k" << v + 1 << ",k" << w + 1 << ",prob\n";
      joint_file.precision(17);
      for (const auto& [pair_k, prob] : clic::joint_k_posterior(trace, v, w))
        joint_file << pair_k.first << ',' << pair_k.second << ',' << prob << '\n';
    }
  }
}

int cmd_fit(const RunConfig& config) {
  if (config.views < 2) throw std::runtime_error("fit needs at least two views");
  if (static_cast<int>(config.view.size()) != config.views)
    throw std::runtime_error("fit needs a data file per view (config sections or --data)");
  if (config.chains < 1) throw std::runtime_error("chains must be at least 1");

  // Ingest the per-view matrices.
  clic::MultiViewData data;
  data.dim.resize(config.views);
  data.x.resize(config.views);
  for (int v = 0; v < config.views; ++v) {
    if (config.view[v].data.empty())
      throw std::runtime_error("view " + std::to_string(v + 1) + " has no data file");
    std::vector<std::vector<double>> rows =
        clic::read_matrix_csv(config.view[v].data, config.view[v].header);
    if (rows.empty()) throw std::runtime_error(config.view[v].data + ": no data rows");
    const int dim = static_cast<int>(rows[0].size());
    if (config.view[v].dim != 0 && config.view[v].dim != dim)
      throw std::runtime_error(config.view[v].data + ": expected dim " +
                               std::to_string(config.view[v].dim) + ", found " +
                               std::to_string(dim));
    if (v == 0)
      data.n = static_cast<long long>(rows.size());
    else if (static_cast<long long>(rows.size()) != data.n)
      throw std::runtime_error(config.view[v].data + ": row count differs across views");
    data.dim[v] = dim;
    data.x[v].resize(data.n * dim);
    for (long long i = 0; i < data.n; ++i)
      for (int d = 0; d < dim; ++d) data.x[v][i * dim + d] = rows[i][d];
  }

  // Assemble the sampler configuration.
  clic::SamplerConfig sc;
  sc.iterations = config.iters;
  sc.burn_in = config.burnin;
  sc.thin = config.thin;
  sc.rho = parse_rho(config.rho);
  if (config.scheme == "joint")
    sc.labels.kind = clic::LabelScheme::Kind::joint;
  else if (config.scheme == "conditional")
    sc.labels.kind = clic::LabelScheme::Kind::conditional;
  else
    throw std::runtime_error("unknown label scheme '" + config.scheme + "'");
  for (int v : config.view_order) sc.labels.view_order.push_back(v - 1);
  sc.L = config.L.empty() ? std::vector<int>(config.views, 5) : config.L;
  sc.gamma = config.gamma.empty() ? std::vector<double>(config.views, 1.0) : config.gamma;
  sc.kernels.resize(config.views);
  for (int v = 0; v < config.views; ++v) {
    clic::ViewKernel& kernel = sc.kernels[v];
    const ViewConfig& vc = config.view[v];
    bool regression = config.model == "correlated" && v > 0;
    if (config.model != "uncorrelated" && config.model != "correlated")
      throw std::runtime_error("unknown model '" + config.model + "'");
    if (regression) {
      kernel.type = clic::ViewKernel::Type::regression;
      kernel.reg.base_mean = vc.base_mean.empty() ? 0.0 : vc.base_mean[0];
      kernel.reg.base_sd = vc.base_sd;
      kernel.reg.prec_shape = vc.prec_shape;
      kernel.reg.prec_rate = vc.prec_rate;
      kernel.reg.covariate_view = vc.covariate - 1;
    } else {
      kernel.type = clic::ViewKernel::Type::gaussian;
      kernel.gauss.dim = data.dim[v];
      kernel.gauss.base_mean =
          vc.base_mean.empty() ? std::vector<double>(data.dim[v], 0.0) : vc.base_mean;
      kernel.gauss.base_sd = vc.base_sd;
      kernel.gauss.prec_shape = vc.prec_shape;
      kernel.gauss.prec_rate = vc.prec_rate;
      if (config.standardize) standardize_view(data.x[v], data.n, data.dim[v]);
    }
  }

  // One child seed per chain; chains run concurrently and merge in order.
  std::vector<clic::PosteriorTrace> traces(config.chains);
  std::vector<std::exception_ptr> errors(config.chains);
  {
    std::vector<std::thread> workers;
    for (int chain = 0; chain < config.chains; ++chain) {
      workers.emplace_back([&, chain] {
        try {
          clic::SamplerConfig chain_config = sc;
          chain_config.seed = config.chains == 1
                                  ? config.seed
                                  : clic::child_seed(config.seed, static_cast<std::uint64_t>(chain));
          traces[chain] = clic::run_chain(data, chain_config);
        } catch (...) {
          errors[chain] = std::current_exception();
        }
      });
    }
    for (std::thread& worker : workers) worker.join();
  }
  for (const std::exception_ptr& error : errors)
    if (error) std::rethrow_exception(error);

  clic::PosteriorTrace merged = std::move(traces[0]);
  for (int chain = 1; chain < config.chains; ++chain) {
    clic::PosteriorTrace& t = traces[chain];
    merged.labels.insert(merged.labels.end(), t.labels.begin(), t.labels.end());
    merged.rho.insert(merged.rho.end(), t.rho.begin(), t.rho.end());
    merged.rand_pairs.insert(merged.rand_pairs.end(), t.rand_pairs.begin(), t.rand_pairs.end());
    merged.k.insert(merged.k.end(), t.k.begin(), t.k.end());
    merged.wall_seconds += t.wall_seconds;
  }

  fs::create_directories(config.out);
  const fs::path dir(config.out);
  const int V = merged.num_views;
  for (int v = 0; v < V; ++v) {
    std::vector<std::vector<int>> rows(merged.num_draws());
    for (long long d = 0; d < merged.num_draws(); ++d) rows[d] = merged.labels[d][v];
    clic::write_label_rows_csv((dir / ("labels_view" + std::to_string(v + 1) + ".csv")).string(),
                               rows);
  }
  {
    std::vector<std::string> header{"iter", "rho"};
    for (int v = 0; v < V; ++v)
      for (int w = v + 1; w < V; ++w)
        header.push_back("rand_" + std::to_string(v + 1) + std::to_string(w + 1));
    for (int v = 0; v < V; ++v) header.push_back("k" + std::to_string(v + 1));
    std::vector<std::vector<double>> rows(merged.num_draws());
    for (long long d = 0; d < merged.num_draws(); ++d) {
      std::vector<double>& row = rows[d];
      row.push_back(static_cast<double>(d));
      row.push_back(merged.rho[d]);
      for (double r : merged.rand_pairs[d]) row.push_back(r);
      for (int k : merged.k[d]) row.push_back(static_cast<double>(k));
    }
    clic::write_matrix_csv((dir / "scalars.csv").string(), rows, header);
  }

  std::map<std::string, std::string> manifest;
  manifest["command"] = "fit";
  manifest["views"] = std::to_string(config.views);
  manifest["model"] = config.model;
  manifest["rho"] = config.rho;
  manifest["scheme"] = config.scheme;
  manifest["iters"] = std::to_string(config.iters);
  manifest["burnin"] = std::to_string(config.burnin);
  manifest["thin"] = std::to_string(config.thin);
  manifest["chains"] = std::to_string(config.chains);
  manifest["seed"] = std::to_string(config.seed);
  manifest["standardize"] = config.standardize ? "1" : "0";
  for (int v = 0; v < V; ++v) {
    std::string tag = "view" + std::to_string(v + 1);
    manifest[tag + ".data"] = config.view[v].data;
    manifest[tag + ".hash"] = clic::file_hash_hex(config.view[v].data);
    manifest[tag + ".L"] = std::to_string(sc.L[v]);
    std::ostringstream g;
    g << sc.gamma[v];
    manifest[tag + ".gamma"] = g.str();
  }
  clic::write_manifest((dir / "manifest.txt").string(), manifest);

  write_summaries(merged, dir);
  write_meta(dir, merged.wall_seconds);
  std::cout << "kept draws = " << merged.num_draws() << "\nout = " << config.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// summarize

clic::PosteriorTrace load_trace(const std::string& trace_dir) {
  const fs::path dir(trace_dir);
  clic::PosteriorTrace trace;
  for (int v = 1;; ++v) {
    fs::path file = dir / ("labels_view" + std::to_string(v) + ".csv");
    if (!fs::exists(file)) break;
    std::vector<std::vector<int>> rows = clic::read_label_rows_csv(file.string());
    if (v == 1) {
      trace.labels.resize(rows.size());
      for (std::size_t d = 0; d < rows.size(); ++d) trace.labels[d].resize(0);
    } else if (rows.size() != trace.labels.size()) {
      throw std::runtime_error("label files disagree on draw count");
    }
    for (std::size_t d = 0; d < rows.size(); ++d) trace.labels[d].push_back(std::move(rows[d]));
    ++trace.num_views;
  }
  if (trace.num_views < 2) throw std::runtime_error("trace needs labels_view1/2 files");
  if (trace.labels.empty()) throw std::runtime_error("trace is empty");
  trace.n = static_cast<long long>(trace.labels[0][0].size());
  trace.L.assign(trace.num_views, 0);

  // Scalars: keep rho if present, recompute the rest from the labels.
  fs::path scalars = dir / "scalars.csv";
  trace.rho.assign(trace.labels.size(), 0.0);
  if (fs::exists(scalars)) {
    std::ifstream in(scalars);
    std::string header_line;
    std::getline(in, header_line);
    std::vector<std::string> header = split(trim(header_line), ',');
    int rho_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == "rho") rho_col = static_cast<int>(c);
    std::vector<std::vector<double>> rows = clic::read_matrix_csv(scalars.string(), true);
    if (rho_col >= 0 && rows.size() == trace.labels.size())
      for (std::size_t d = 0; d < rows.size(); ++d) trace.rho[d] = rows[d][rho_col];
  }
  for (std::size_t d = 0; d < trace.labels.size(); ++d) {
    std::vector<double> rands(trace.num_views * (trace.num_views - 1) / 2);
    std::vector<int> ks(trace.num_views);
    for (int v = 0; v < trace.num_views; ++v) {
      ks[v] = clic::num_clusters(trace.labels[d][v]);
      trace.L[v] = std::max(trace.L[v], ks[v]);
      for (int w = v + 1; w < trace.num_views; ++w)
        rands[clic::PosteriorTrace::pair_column(v, w, trace.num_views)] =
            clic::rand_index(trace.labels[d][v], trace.labels[d][w]);
    }
    trace.rand_pairs.push_back(std::move(rands));
    trace.k.push_back(std::move(ks));
  }
  return trace;
}

int cmd_summarize(const std::string& trace_dir, const std::string& out_dir) {
  clic::PosteriorTrace trace = load_trace(trace_dir);
  fs::create_directories(out_dir);
  write_summaries(trace, out_dir);
  std::cout << "draws = " << trace.num_draws() << "\nout = " << out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle(bool tamper, bool quick, const std::string& out) {
  std::vector<clic::OracleReport> reports = clic::run_all_checks(tamper, quick, &std::cout);
  clic::write_report_csv(out, reports);
  long long failures = 0;
  for (const clic::OracleReport& report : reports) failures += report.pass ? 0 : 1;
  std::cout << reports.size() - failures << "/" << reports.size() << " checks passed, report at "
            << out << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dependent multiview clustering with the product-centered Dirichlet process"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic multiview dataset");
  sim_cmd->add_option("--scenario", sim.scenario, "two-view | three-view | varying | correlated")
      ->required()
      ->check(CLI::IsMember({"two-view", "three-view", "varying", "correlated"}));
  sim_cmd->add_option("--case", sim.case_id, "label coupling case")->check(CLI::Range(1, 3));
  sim_cmd->add_option("--eta2", sim.eta2, "second-view noise variance");
  sim_cmd->add_option("--n", sim.n, "number of objects");
  sim_cmd->add_option("--d2", sim.d2, "second-view dimension (varying scenario)");
  sim_cmd->add_option("--seed", sim.seed, "random seed");
  sim_cmd->add_option("--out", sim.out, "output directory");

  RunConfig fit;
  std::string fit_config_path;
  std::vector<std::string> fit_data;
  std::string fit_L, fit_gamma, fit_order;
  bool fit_header = false;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Run the Gibbs sampler on view CSVs");
  CLI::Option* o_config = fit_cmd->add_option("--config", fit_config_path, "key = value config file");
  CLI::Option* o_data = fit_cmd->add_option("--data", fit_data, "per-view data CSV (repeat)");
  CLI::Option* o_header = fit_cmd->add_flag("--header", fit_header, "data CSVs carry a header row");
  CLI::Option* o_views = fit_cmd->add_option("--views", fit.views, "number of views");
  CLI::Option* o_model =
      fit_cmd->add_option("--model", fit.model, "uncorrelated | correlated")
          ->check(CLI::IsMember({"uncorrelated", "correlated"}));
  CLI::Option* o_L = fit_cmd->add_option("--L", fit_L, "components per view, e.g. 5,5");
  CLI::Option* o_gamma = fit_cmd->add_option("--gamma", fit_gamma, "per-view concentrations");
  CLI::Option* o_rho =
      fit_cmd->add_option("--rho", fit.rho, "fixed:v | gamma:a,b | grid:lo:hi:step");
  CLI::Option* o_scheme = fit_cmd->add_option("--scheme", fit.scheme, "joint | conditional")
                              ->check(CLI::IsMember({"joint", "conditional"}));
  CLI::Option* o_order = fit_cmd->add_option("--view-order", fit_order, "1-based update order");
  CLI::Option* o_iters = fit_cmd->add_option("--iters", fit.iters, "total sweeps");
  CLI::Option* o_burnin = fit_cmd->add_option("--burnin", fit.burnin, "burn-in sweeps");
  CLI::Option* o_thin = fit_cmd->add_option("--thin", fit.thin, "keep every thin-th sweep");
  CLI::Option* o_seed = fit_cmd->add_option("--seed", fit.seed, "master seed");
  CLI::Option* o_chains = fit_cmd->add_option("--chains", fit.chains, "independent chains");
  CLI::Option* o_standardize =
      fit_cmd->add_option("--standardize", fit.standardize, "z-score gaussian views (0/1)");
  CLI::Option* o_out = fit_cmd->add_option("--out", fit.out, "output directory");

  std::string sum_trace, sum_out;
  CLI::App* sum_cmd = app.add_subcommand("summarize", "Summarize a written trace directory");
  sum_cmd->add_option("--trace", sum_trace, "fit output directory")->required();
  sum_cmd->add_option("--out", sum_out, "summary output directory (default: trace dir)");

  bool oracle_tamper = false, oracle_quick = false;
  std::string oracle_out = "oracle_report.csv";
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Run the ground-truth check battery");
  oracle_cmd->add_flag("--tamper", oracle_tamper, "inject one wrong constant (must fail)");
  oracle_cmd->add_flag("--quick", oracle_quick, "reduced battery for smoke runs");
  oracle_cmd->add_option("--out", oracle_out, "report CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (fit_cmd->parsed()) {
      // Defaults, then config file, then flags: flags win.
      RunConfig flags = fit;
      RunConfig config;
      if (o_config->count()) load_config_file(config, fit_config_path);
      if (o_views->count()) config.views = flags.views;
      if (o_model->count()) config.model = flags.model;
      if (o_rho->count()) config.rho = flags.rho;
      if (o_scheme->count()) config.scheme = flags.scheme;
      if (o_order->count()) config.view_order = parse_int_list(fit_order, "view order");
      if (o_L->count()) config.L = parse_int_list(fit_L, "L");
      if (o_gamma->count()) config.gamma = parse_double_list(fit_gamma, "gamma");
      if (o_iters->count()) config.iters = flags.iters;
      if (o_burnin->count()) config.burnin = flags.burnin;
      if (o_thin->count()) config.thin = flags.thin;
      if (o_seed->count()) config.seed = flags.seed;
      if (o_chains->count()) config.chains = flags.chains;
      if (o_standardize->count()) config.standardize = flags.standardize;
      if (o_out->count()) config.out = flags.out;
      if (o_data->count()) {
        if (static_cast<int>(fit_data.size()) > config.views &&
            !o_views->count() && config.view.empty())
          config.views = static_cast<int>(fit_data.size());
        if (static_cast<int>(config.view.size()) < static_cast<int>(fit_data.size()))
          config.view.resize(fit_data.size());
        for (std::size_t v = 0; v < fit_data.size(); ++v) config.view[v].data = fit_data[v];
      }
      if (o_header->count())
        for (ViewConfig& view : config.view) view.header = fit_header;
      if (!o_views->count() && static_cast<int>(config.view.size()) > config.views)
        config.views = static_cast<int>(config.view.size());
      return cmd_fit(config);
    }
    if (sum_cmd->parsed()) return cmd_summarize(sum_trace, sum_out.empty() ? sum_trace : sum_out);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_tamper, oracle_quick, oracle_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
