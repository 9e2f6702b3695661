#include "rough/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rough/errors.hpp"

namespace rough {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw ConfigError("mean: empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) throw ConfigError("sample_variance: need at least 2 points");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double median(std::vector<double> x) {
    if (x.empty()) throw ConfigError("median: empty sample");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    if (n % 2 == 1) return x[n / 2];
    return 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

double student_t_975(int dof) {
    if (dof < 1) throw ConfigError("student_t_975: dof must be >= 1");
    const double z = 1.959963984540054;  // Phi^{-1}(0.975)
    const double v = static_cast<double>(dof);
    const double z3 = z * z * z;
    const double z5 = z3 * z * z;
    const double z7 = z5 * z * z;
    // Cornish-Fisher expansion of the t quantile around the normal one.
    return z + (z3 + z) / (4.0 * v) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * v * v) +
           (3.0 * z7 + 19.0 * z5 + 17.0 * z3 - 15.0 * z) / (384.0 * v * v * v);
}

Interval t_interval_mean(const std::vector<double>& x) {
    const double m = mean(x);
    const double se = std::sqrt(sample_variance(x) / static_cast<double>(x.size()));
    const double t = student_t_975(static_cast<int>(x.size()) - 1);
    return {m - t * se, m + t * se};
}

Interval wilson_interval(std::size_t successes, std::size_t n) {
    if (n == 0) throw ConfigError("wilson_interval: n must be positive");
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // the score endpoints are exactly 0 and 1 at the boundary counts; keep
    // them there instead of leaving cancellation residue
    const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = successes == n ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("linear_fit: need matching x, y with at least 2 points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ConfigError("linear_fit: degenerate x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_test_pvalue(std::vector<double> data, const std::function<double(double)>& cdf) {
    const std::size_t n = data.size();
    if (n == 0) throw ConfigError("ks_test_pvalue: empty sample");
    std::sort(data.begin(), data.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(data[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    // Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += 2.0 * sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace rough
