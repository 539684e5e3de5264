#ifndef CLIC_STATS_HPP
#define CLIC_STATS_HPP

#include <vector>

namespace clic {

// Two-sample Kolmogorov-Smirnov p-value (asymptotic Kolmogorov tail with the
// Stephens small-sample correction). With heavily tied data the nominal p is
// slightly optimistic, which only loosens p-threshold gates.
double ks_two_sample_p(std::vector<double> a, std::vector<double> b);

// Pearson goodness-of-fit p-value of observed counts against expected
// probabilities. Bins with expected count < 5 are pooled into their neighbor;
// degrees of freedom = number of effective bins - 1.
double chi_square_gof_p(const std::vector<long long>& observed,
                        const std::vector<double>& expected_probs);

// Linearly interpolated quantile (the common "type 7" rule); p in [0, 1].
double quantile(std::vector<double> values, double p);

double mean(const std::vector<double>& values);
double sample_sd(const std::vector<double>& values);

// Total variation distance between two PMFs over the same support.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace clic

#endif  // CLIC_STATS_HPP
