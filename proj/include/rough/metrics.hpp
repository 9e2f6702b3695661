#pragma once

// Distances between dyadic lifts.
//
// rho_i(a, b) = ( sum_{n=1}^{n_max} n^gamma sum_{k=1}^{2^n}
//                 |a^i(n,k) - b^i(n,k)|^{p/i} )^{i/p}
// with Frobenius norms on each tensor level. Omitting b compares against the
// trivial lift.
//
// dp_exact computes the p-variation distance restricted to partitions whose
// points lie on the dyadic grid at grid_level: for each level i it maximizes
// sum_l |a^i - b^i over block l|^{p/i} over such partitions by interval
// dynamic programming and returns max_i (optimum_i)^{i/p}. For polylines with
// vertices on the grid this captures every vertex; refining past the segment
// scale cannot enlarge the supremum because a linear difference split in two
// loses mass for p > 1. Whether the unrestricted supremum is attained on a
// grid in general is open; results are reported as grid-restricted.

#include <cstddef>

#include "rough/lift.hpp"

namespace rough {

struct MetricParams {
    double p = 2.5;           // variation exponent, must lie in (2, 4)
    double gamma = 2.0;       // dyadic weight, must exceed p - 1
    int n_max = 8;            // finest level entering the rho sums
    double hl_constant = 1.0; // multiplicative constant of the two-lift bound

    void validate() const;
};

double rho(const DyadicLift& a, const DyadicLift& b, int level, const MetricParams& params);
double rho(const DyadicLift& a, int level, const MetricParams& params);

inline constexpr int kMaxDpGridLevel = 11;  // at most 2^11 + 1 partition points

double dp_exact(const DyadicLift& a, const DyadicLift& b, const MetricParams& params,
                int grid_level);

// The seven rho evaluations entering the two-lift variation bound:
// differences d_i = rho_i(a, b) and single-lift values a_i = rho_i(a),
// b_i = rho_i(b) for i = 1, 2.
struct HlRhoValues {
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    double a1 = 0.0, b1 = 0.0;
    double a2 = 0.0, b2 = 0.0;
};

HlRhoValues hl_rho_values(const DyadicLift& a, const DyadicLift& b, const MetricParams& params);

// hl_constant * max of the six products
//   { d1, d2, d1*(a1+b1), d3, d2*(a1+b1), d1*(a2+b2+(a1+b1)^2) }.
double hl_bound(const HlRhoValues& v, const MetricParams& params);

}  // namespace rough
