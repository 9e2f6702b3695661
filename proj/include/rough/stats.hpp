#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rough {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

double mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);
double median(std::vector<double> x);  // by value: sorts a copy

// 95% t-interval for the mean. The Student quantile uses the Cornish-Fisher
// expansion in the normal quantile, accurate to ~1e-4 for dof >= 8, which is
// far below the Monte Carlo noise it decorates.
Interval t_interval_mean(const std::vector<double>& x);

// 95% Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t n);

// Ordinary least squares y ~ intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// One-sample Kolmogorov-Smirnov test against a continuous cdf.
// Returns the asymptotic p-value (Stephens' scaling of the K distribution).
double ks_test_pvalue(std::vector<double> data, const std::function<double(double)>& cdf);

double student_t_975(int dof);
double normal_cdf(double x);

}  // namespace rough
