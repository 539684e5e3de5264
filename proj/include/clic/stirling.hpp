#ifndef CLIC_STIRLING_HPP
#define CLIC_STIRLING_HPP

#include <vector>

namespace clic {

// ln Gamma(x + n) - ln Gamma(x), the log rising factorial (x)(x+1)...(x+n-1).
// Exactly 0 at n = 0. Throws std::invalid_argument for x <= 0 or n < 0.
double log_rising_factorial(double x, long long n);

// Unsigned Stirling numbers of the first kind in log space, built once via
// |s(n+1, w)| = n |s(n, w)| + |s(n, w - 1)| and then immutable, so the table
// is shareable across workers. Conventions: |s(0,0)| = 1, |s(n,0)| = 0 for
// n >= 1, |s(n,m)| = 0 for m > n (logs of zero are -infinity).
class LogStirlingTable {
 public:
  explicit LogStirlingTable(int n_max);

  int n_max() const { return n_max_; }

  // ln |s(n, m)| for 0 <= m <= n <= n_max; throws std::out_of_range otherwise.
  double operator()(int n, int m) const;

 private:
  int n_max_;
  std::vector<double> values_;  // triangular rows, row n holds m = 0..n
};

}  // namespace clic

#endif  // CLIC_STIRLING_HPP
