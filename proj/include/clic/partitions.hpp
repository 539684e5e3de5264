#ifndef CLIC_PARTITIONS_HPP
#define CLIC_PARTITIONS_HPP

#include <vector>

namespace clic {

// Cluster labels for n objects, canonical form: labels are 1-based, the first
// object has label 1, and each new label is exactly one plus the largest label
// seen so far (first-appearance order). K = max(labels).
using Labels = std::vector<int>;

// Relabels by first appearance. Idempotent; preserves the co-clustering
// relation. Throws std::invalid_argument on empty input.
Labels canonicalize(const std::vector<int>& raw);

int num_clusters(const Labels& c);

// Sizes of clusters 1..K.
std::vector<long long> cluster_sizes(const Labels& c);

// Cross-tabulation of two partitions of the same objects. counts is row-major
// K1 x K2; row_sums/col_sums recover the per-view cluster sizes; no row or
// column is all zero.
struct ContingencyTable {
  int K1 = 0;
  int K2 = 0;
  long long n = 0;
  std::vector<long long> counts;
  std::vector<long long> row_sums;
  std::vector<long long> col_sums;

  long long at(int k1, int k2) const { return counts[static_cast<std::size_t>(k1) * K2 + k2]; }
};

// Throws std::invalid_argument on length mismatch or empty input.
ContingencyTable contingency(const Labels& c1, const Labels& c2);

// Fraction of object pairs on which the two partitions agree (co-clustered in
// both or separated in both). Requires n >= 2.
double rand_index(const Labels& c1, const Labels& c2);

// Permutation-model adjustment of the Rand index under fixed marginals;
// equals 1 iff the partitions are identical. When the adjustment denominator
// is zero (both partitions trivial in the same way) the value is 1.0 for
// identical partitions and std::domain_error is thrown otherwise.
double adjusted_rand_index(const Labels& c1, const Labels& c2);

// Variation of information, H(C1) + H(C2) - 2 I(C1, C2), natural logs.
// A metric on partitions; exactly 0.0 for identical partitions.
double variation_of_information(const Labels& c1, const Labels& c2);

// All set partitions of {1..n} in canonical form via restricted-growth
// strings, so output needs no deduplication; count = Bell(n).
// Guarded to 1 <= n <= 12.
std::vector<Labels> enumerate_partitions(int n);

}  // namespace clic

#endif  // CLIC_PARTITIONS_HPP
