#ifndef CLIC_SIMULATE_HPP
#define CLIC_SIMULATE_HPP

#include <string>
#include <vector>

#include "clic/partitions.hpp"
#include "clic/rng.hpp"
#include "clic/sampler.hpp"

namespace clic {

struct SyntheticDataset {
  MultiViewData data;
  std::vector<Labels> truth;  // per view, canonical
  std::string scenario;
};

// Two Gaussian views with two balanced clusters each. View-1 means +1/-1 with
// variance 0.2; view-2 means -1/+1 with variance eta2. Label coupling:
// case 1 copies c2 = c1, case 3 draws c2 independently, case 2 mixes the two
// (copy with probability 2/3, independent with probability 1/3).
SyntheticDataset gen_two_view(int case_id, double eta2, long long n, Rng& rng);

// Three dependent binary clusterings whose dependence graph is not a tree:
// c1 fair; c2 = c1 with probability 1/3, otherwise the other cluster;
// c3 = c1 if u < 1/3, c3 = c2 if u < 2/3, otherwise fresh and fair.
// Gaussian views with means (+1/-1, -1/+1, +2/-2) and variances (0.2, 0.2, 1).
SyntheticDataset gen_three_view(long long n, Rng& rng);

// Two views with d1 = 2 and configurable d2. View-1 means (1,-1) and (-1,1);
// view-2 means the alternating +/-1 sequence of length d2 and its negation.
// Isotropic variance 0.4 in both views; c2 = c1 with probability 8/10, else
// independent.
SyntheticDataset gen_varying(long long n, int d2, Rng& rng);

// Correlated pair: view 1 as in gen_two_view, view 2 is the scalar response
// x2 = slope * x1 + noise with slope -1 for c2 = 1 and +1 for c2 = 2 and
// noise variance eta2. Label coupling shares gen_two_view's cases.
SyntheticDataset gen_correlated(int case_id, double eta2, long long n, Rng& rng);

}  // namespace clic

#endif  // CLIC_SIMULATE_HPP
