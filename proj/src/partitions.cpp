#include "clic/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace clic {

namespace {

long long choose2(long long m) { return m * (m - 1) / 2; }

}  // namespace

Labels canonicalize(const std::vector<int>& raw) {
  if (raw.empty()) throw std::invalid_argument("canonicalize: empty label sequence");
  Labels out(raw.size());
  std::unordered_map<int, int> seen;
  seen.reserve(raw.size());
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = seen.emplace(raw[i], next + 1);
    if (inserted) ++next;
    out[i] = it->second;
  }
  return out;
}

int num_clusters(const Labels& c) {
  if (c.empty()) throw std::invalid_argument("num_clusters: empty partition");
  return *std::max_element(c.begin(), c.end());
}

std::vector<long long> cluster_sizes(const Labels& c) {
  std::vector<long long> sizes(num_clusters(c), 0);
  for (int label : c) {
    if (label < 1 || label > static_cast<int>(sizes.size()))
      throw std::invalid_argument("cluster_sizes: labels not canonical");
    ++sizes[label - 1];
  }
  return sizes;
}

ContingencyTable contingency(const Labels& c1, const Labels& c2) {
  if (c1.empty()) throw std::invalid_argument("contingency: empty partition");
  if (c1.size() != c2.size()) throw std::invalid_argument("contingency: length mismatch");
  ContingencyTable t;
  t.K1 = num_clusters(c1);
  t.K2 = num_clusters(c2);
  t.n = static_cast<long long>(c1.size());
  t.counts.assign(static_cast<std::size_t>(t.K1) * t.K2, 0);
  t.row_sums.assign(t.K1, 0);
  t.col_sums.assign(t.K2, 0);
  for (std::size_t i = 0; i < c1.size(); ++i) {
    int k1 = c1[i] - 1;
    int k2 = c2[i] - 1;
    if (k1 < 0 || k1 >= t.K1 || k2 < 0 || k2 >= t.K2)
      throw std::invalid_argument("contingency: labels must be positive");
    ++t.counts[static_cast<std::size_t>(k1) * t.K2 + k2];
    ++t.row_sums[k1];
    ++t.col_sums[k2];
  }
  return t;
}

double rand_index(const Labels& c1, const Labels& c2) {
  if (c1.size() < 2) throw std::invalid_argument("rand_index: need at least two objects");
  ContingencyTable t = contingency(c1, c2);
  long long cells2 = 0, rows2 = 0, cols2 = 0;
  for (long long c : t.counts) cells2 += choose2(c);
  for (long long r : t.row_sums) rows2 += choose2(r);
  for (long long c : t.col_sums) cols2 += choose2(c);
  long long pairs = choose2(t.n);
  // agreements = co-clustered in both + separated in both
  long long agree = cells2 + (pairs - rows2 - cols2 + cells2);
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

double adjusted_rand_index(const Labels& c1, const Labels& c2) {
  if (c1.size() < 2) throw std::invalid_argument("adjusted_rand_index: need at least two objects");
  ContingencyTable t = contingency(c1, c2);
  long long cells2 = 0, rows2 = 0, cols2 = 0;
  for (long long c : t.counts) cells2 += choose2(c);
  for (long long r : t.row_sums) rows2 += choose2(r);
  for (long long c : t.col_sums) cols2 += choose2(c);
  double pairs = static_cast<double>(choose2(t.n));
  double expected = static_cast<double>(rows2) * static_cast<double>(cols2) / pairs;
  double maximum = 0.5 * (static_cast<double>(rows2) + static_cast<double>(cols2));
  double denom = maximum - expected;
  if (std::abs(denom) < 1e-12) {
    // Only both-trivial pairs land here; identical partitions score 1.
    if (canonicalize(c1) == canonicalize(c2)) return 1.0;
    throw std::domain_error("adjusted_rand_index: undefined (zero adjustment denominator)");
  }
  return (static_cast<double>(cells2) - expected) / denom;
}

double variation_of_information(const Labels& c1, const Labels& c2) {
  ContingencyTable t = contingency(c1, c2);
  // VI = H(C1|C2) + H(C2|C1) = sum_cells (n_cell/n) [ln(row/cell) + ln(col/cell)]
  // and is exactly zero for identical partitions (every cell equals its row
  // and column).
  double vi = 0.0;
  double n = static_cast<double>(t.n);
  for (int k1 = 0; k1 < t.K1; ++k1) {
    for (int k2 = 0; k2 < t.K2; ++k2) {
      long long cell = t.at(k1, k2);
      if (cell == 0) continue;
      double c = static_cast<double>(cell);
      vi += c / n *
            (std::log(static_cast<double>(t.row_sums[k1]) / c) +
             std::log(static_cast<double>(t.col_sums[k2]) / c));
    }
  }
  return vi;
}

std::vector<Labels> enumerate_partitions(int n) {
  if (n < 1 || n > 12)
    throw std::invalid_argument("enumerate_partitions: n must be in [1, 12]");
  std::vector<Labels> out;
  // Restricted-growth strings: a[0] = 1 and a[i] <= 1 + max(a[0..i-1]), which
  // is exactly the canonical-form invariant, so every emitted labeling is
  // canonical and distinct.
  Labels a(n, 1);
  std::vector<int> maxes(n, 1);  // maxes[i] = max(a[0..i])
  while (true) {
    out.push_back(a);
    int i = n - 1;
    while (i > 0 && a[i] == maxes[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    maxes[i] = std::max(maxes[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 1;
      maxes[j] = maxes[j - 1];
    }
  }
  return out;
}

}  // namespace clic
