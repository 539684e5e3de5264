#include "clic/simulate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace clic {

namespace {

void require_case(int case_id) {
  if (case_id < 1 || case_id > 3)
    throw std::invalid_argument("simulate: case_id must be 1, 2, or 3");
}

void require_size(long long n) {
  if (n < 1) throw std::invalid_argument("simulate: n must be at least 1");
}

int fair_label(Rng& rng) { return rng.uniform_int(2) + 1; }

// Couples c2 to c1: case 1 copies, case 3 is independent, case 2 copies with
// probability 2/3 and is independent otherwise.
int couple_label(int case_id, int c1, Rng& rng) {
  switch (case_id) {
    case 1:
      return c1;
    case 2:
      return rng.uniform() < 2.0 / 3.0 ? c1 : fair_label(rng);
    default:
      return fair_label(rng);
  }
}

// (-1)^(c+1): cluster 1 -> +1, cluster 2 -> -1.
double sign_plus(int c) { return c == 1 ? 1.0 : -1.0; }

// (-1)^c: cluster 1 -> -1, cluster 2 -> +1.
double sign_minus(int c) { return c == 1 ? -1.0 : 1.0; }

}  // namespace

SyntheticDataset gen_two_view(int case_id, double eta2, long long n, Rng& rng) {
  require_case(case_id);
  require_size(n);
  if (!(eta2 > 0.0)) throw std::invalid_argument("gen_two_view: eta2 must be positive");
  const double sd1 = std::sqrt(0.2);
  const double sd2 = std::sqrt(eta2);

  std::vector<int> c1(n), c2(n);
  SyntheticDataset out;
  out.data.n = n;
  out.data.dim = {1, 1};
  out.data.x.assign(2, std::vector<double>(n));
  for (long long i = 0; i < n; ++i) {
    c1[i] = fair_label(rng);
    c2[i] = couple_label(case_id, c1[i], rng);
    out.data.x[0][i] = rng.normal(sign_plus(c1[i]), sd1);
    out.data.x[1][i] = rng.normal(sign_minus(c2[i]), sd2);
  }
  out.truth = {canonicalize(c1), canonicalize(c2)};
  std::ostringstream name;
  name << "two_view:case=" << case_id << ":eta2=" << eta2;
  out.scenario = name.str();
  return out;
}

SyntheticDataset gen_three_view(long long n, Rng& rng) {
  require_size(n);
  const double sd12 = std::sqrt(0.2);

  std::vector<int> c1(n), c2(n), c3(n);
  SyntheticDataset out;
  out.data.n = n;
  out.data.dim = {1, 1, 1};
  out.data.x.assign(3, std::vector<double>(n));
  for (long long i = 0; i < n; ++i) {
    c1[i] = fair_label(rng);
    c2[i] = rng.uniform() < 1.0 / 3.0 ? c1[i] : 3 - c1[i];
    double u = rng.uniform();
    if (u < 1.0 / 3.0)
      c3[i] = c1[i];
    else if (u < 2.0 / 3.0)
      c3[i] = c2[i];
    else
      c3[i] = fair_label(rng);
    out.data.x[0][i] = rng.normal(sign_plus(c1[i]), sd12);
    out.data.x[1][i] = rng.normal(sign_minus(c2[i]), sd12);
    out.data.x[2][i] = rng.normal(2.0 * sign_plus(c3[i]), 1.0);
  }
  out.truth = {canonicalize(c1), canonicalize(c2), canonicalize(c3)};
  out.scenario = "three_view";
  return out;
}

SyntheticDataset gen_varying(long long n, int d2, Rng& rng) {
  require_size(n);
  if (d2 < 1) throw std::invalid_argument("gen_varying: d2 must be at least 1");
  const double sd = std::sqrt(0.4);

  // View-1 means (1,-1) and (-1,1); view-2 means the alternating sequence
  // (1,-1,1,...) of length d2 and its negation.
  std::vector<double> mean2(d2);
  for (int j = 0; j < d2; ++j) mean2[j] = j % 2 == 0 ? 1.0 : -1.0;

  std::vector<int> c1(n), c2(n);
  SyntheticDataset out;
  out.data.n = n;
  out.data.dim = {2, d2};
  out.data.x.assign(2, {});
  out.data.x[0].resize(2 * n);
  out.data.x[1].resize(static_cast<std::size_t>(d2) * n);
  for (long long i = 0; i < n; ++i) {
    c1[i] = fair_label(rng);
    c2[i] = rng.uniform() < 0.8 ? c1[i] : fair_label(rng);
    double s1 = sign_plus(c1[i]);
    out.data.x[0][2 * i] = rng.normal(s1, sd);
    out.data.x[0][2 * i + 1] = rng.normal(-s1, sd);
    double s2 = sign_plus(c2[i]);
    for (int j = 0; j < d2; ++j)
      out.data.x[1][static_cast<std::size_t>(i) * d2 + j] = rng.normal(s2 * mean2[j], sd);
  }
  out.truth = {canonicalize(c1), canonicalize(c2)};
  std::ostringstream name;
  name << "varying:n=" << n << ":d2=" << d2;
  out.scenario = name.str();
  return out;
}

SyntheticDataset gen_correlated(int case_id, double eta2, long long n, Rng& rng) {
  require_case(case_id);
  require_size(n);
  if (!(eta2 > 0.0)) throw std::invalid_argument("gen_correlated: eta2 must be positive");
  const double sd1 = std::sqrt(0.2);
  const double sd2 = std::sqrt(eta2);

  std::vector<int> c1(n), c2(n);
  SyntheticDataset out;
  out.data.n = n;
  out.data.dim = {1, 1};
  out.data.x.assign(2, std::vector<double>(n));
  for (long long i = 0; i < n; ++i) {
    c1[i] = fair_label(rng);
    c2[i] = couple_label(case_id, c1[i], rng);
    double x1 = rng.normal(sign_plus(c1[i]), sd1);
    out.data.x[0][i] = x1;
    out.data.x[1][i] = rng.normal(sign_minus(c2[i]) * x1, sd2);
  }
  out.truth = {canonicalize(c1), canonicalize(c2)};
  std::ostringstream name;
  name << "correlated:case=" << case_id << ":eta2=" << eta2;
  out.scenario = name.str();
  return out;
}

}  // namespace clic
