#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "clic/partitions.hpp"
#include "clic/rng.hpp"

using namespace clic;

namespace {

// Independent quadratic-time Rand index: walk all object pairs.
double rand_brute(const Labels& a, const Labels& b) {
  const std::size_t n = a.size();
  long long agree = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool sa = a[i] == a[j];
      bool sb = b[i] == b[j];
      agree += (sa == sb);
      ++pairs;
    }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

Labels random_partition(int n, int max_label, Rng& rng) {
  std::vector<int> raw(n);
  for (int i = 0; i < n; ++i) raw[i] = rng.uniform_int(max_label) + 1;
  return canonicalize(raw);
}

}  // namespace

TEST_CASE("canonicalize relabels by first appearance") {
  CHECK(canonicalize({5, 3, 5, 1}) == Labels{1, 2, 1, 3});
  CHECK(canonicalize({7}) == Labels{1});
  CHECK(canonicalize({-2, -2, 4}) == Labels{1, 1, 2});

  Labels c = canonicalize({2, 9, 2, 9, 9});
  CHECK(canonicalize(c) == c);  // idempotent
  CHECK_THROWS_AS(canonicalize({}), std::invalid_argument);
}

TEST_CASE("cluster counts and sizes") {
  Labels c{1, 2, 1, 3, 2, 1};
  CHECK(num_clusters(c) == 3);
  CHECK(cluster_sizes(c) == std::vector<long long>{3, 2, 1});
  CHECK_THROWS_AS(cluster_sizes(Labels{0, 1}), std::invalid_argument);  // labels are 1-based
}

TEST_CASE("contingency table cross-tabulates") {
  Labels c1{1, 1, 2, 2, 2};
  Labels c2{1, 2, 1, 2, 2};
  ContingencyTable t = contingency(c1, c2);
  CHECK(t.K1 == 2);
  CHECK(t.K2 == 2);
  CHECK(t.n == 5);
  CHECK(t.at(0, 0) == 1);
  CHECK(t.at(0, 1) == 1);
  CHECK(t.at(1, 0) == 1);
  CHECK(t.at(1, 1) == 2);
  CHECK(t.row_sums == std::vector<long long>{2, 3});
  CHECK(t.col_sums == std::vector<long long>{2, 3});
  CHECK_THROWS_AS(contingency({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("rand index matches pairwise enumeration") {
  CHECK(rand_index({1, 1, 2}, {1, 1, 2}) == doctest::Approx(1.0));
  CHECK(rand_index({1, 1}, {1, 2}) == doctest::Approx(0.0));
  CHECK(rand_index({1, 1, 2, 2}, {1, 2, 1, 2}) == doctest::Approx(1.0 / 3.0));

  Rng rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 2 + rng.uniform_int(40);
    Labels a = random_partition(n, 5, rng);
    Labels b = random_partition(n, 4, rng);
    CHECK(rand_index(a, b) == doctest::Approx(rand_brute(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("adjusted rand index") {
  Labels a{1, 1, 1, 2, 2, 3};
  CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));

  // Hand value: contingency {{2,1,0},{0,2,0},{0,0,1}} for the pair below has
  // sum C(nij,2) = 2, expected = 4*4/15 = 16/15, max-like term = (4+4)/2 = 4.
  // ARI = (2 - 16/15) / (4 - 16/15) = 14/44 = 7/22.
  Labels b{1, 1, 2, 2, 2, 3};
  CHECK(adjusted_rand_index(a, b) == doctest::Approx(7.0 / 22.0).epsilon(1e-12));

  // Both degenerate in the same way: identical singletons are a perfect match.
  CHECK(adjusted_rand_index({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0));
  CHECK(adjusted_rand_index({1, 1, 1}, {1, 1, 1}) == doctest::Approx(1.0));
  // One block vs all singletons: expected index equals max index, the
  // adjustment denominator stays positive, and agreement is exactly chance.
  CHECK(adjusted_rand_index({1, 1, 1}, {1, 2, 3}) == doctest::Approx(0.0));
}

TEST_CASE("variation of information") {
  Labels a{1, 1, 2, 2};
  CHECK(variation_of_information(a, a) == 0.0);  // exactly, not approximately

  // Orthogonal two-block splits of four objects: H = ln 2 each, I = 0.
  CHECK(variation_of_information({1, 1, 2, 2}, {1, 2, 1, 2}) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

  // Symmetry and the refinement distance H(fine) - H(coarse).
  Labels fine{1, 2, 3, 4};
  Labels coarse{1, 1, 2, 2};
  CHECK(variation_of_information(fine, coarse) ==
        doctest::Approx(variation_of_information(coarse, fine)));
  CHECK(variation_of_information(fine, coarse) ==
        doctest::Approx(std::log(4.0) - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("enumerate_partitions yields each partition once, Bell counts") {
  const long long bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (int n = 1; n <= 8; ++n) {
    std::vector<Labels> all = enumerate_partitions(n);
    CHECK(static_cast<long long>(all.size()) == bell[n]);
    std::set<Labels> unique(all.begin(), all.end());
    CHECK(unique.size() == all.size());
    for (const Labels& c : all) {
      CHECK(static_cast<int>(c.size()) == n);
      CHECK(canonicalize(c) == c);
    }
  }
  CHECK_THROWS_AS(enumerate_partitions(0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_partitions(13), std::invalid_argument);
}
