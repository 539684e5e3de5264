#ifndef CLIC_EXEC_HPP
#define CLIC_EXEC_HPP

namespace clic {

// Execution policy for the data-parallel kernels (Monte Carlo estimators,
// enumeration sums, similarity matrices, loss minimization). The serial
// reference implementation is kept as the correctness baseline; the parallel
// path uses OpenMP. Results are designed to be independent of thread count:
// per-draw random streams are derived from (seed, draw index) and reductions
// run in a fixed order.
enum class Exec { serial, parallel };

}  // namespace clic

#endif  // CLIC_EXEC_HPP
