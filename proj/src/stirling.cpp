#include "clic/stirling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln(e^a + e^b) with -infinity meaning a zero addend.
double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

std::size_t tri_index(int n, int m) {
  return static_cast<std::size_t>(n) * (n + 1) / 2 + m;
}

}  // namespace

double log_rising_factorial(double x, long long n) {
  if (!(x > 0.0)) throw std::invalid_argument("log_rising_factorial: x must be positive");
  if (n < 0) throw std::invalid_argument("log_rising_factorial: n must be nonnegative");
  if (n == 0) return 0.0;
  return std::lgamma(x + static_cast<double>(n)) - std::lgamma(x);
}

LogStirlingTable::LogStirlingTable(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("LogStirlingTable: n_max must be nonnegative");
  values_.assign(tri_index(n_max, n_max) + 1, kNegInf);
  values_[tri_index(0, 0)] = 0.0;
  for (int n = 0; n < n_max; ++n) {
    double log_n = n > 0 ? std::log(static_cast<double>(n)) : kNegInf;
    for (int m = 0; m <= n + 1; ++m) {
      double keep = m <= n ? log_n + values_[tri_index(n, m)] : kNegInf;
      double open = m >= 1 ? values_[tri_index(n, m - 1)] : kNegInf;
      values_[tri_index(n + 1, m)] = log_add(keep, open);
    }
  }
}

double LogStirlingTable::operator()(int n, int m) const {
  if (n < 0 || n > n_max_ || m < 0 || m > n)
    throw std::out_of_range("LogStirlingTable: index outside table");
  return values_[tri_index(n, m)];
}

}  // namespace clic
