#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rough/errors.hpp"
#include "rough/gaussian.hpp"
#include "rough/lift.hpp"
#include "rough/metrics.hpp"

using rough::DyadicLift;
using rough::GridSample;
using rough::MetricParams;

namespace {

MetricParams params(double p, double gamma, int n_max) {
    MetricParams mp;
    mp.p = p;
    mp.gamma = gamma;
    mp.n_max = n_max;
    return mp;
}

GridSample brownian_sample(int level, int dim, std::uint64_t seed) {
    rough::CovarianceModel m;
    m.hurst = 0.5;
    return rough::sample_one(m, level, dim, seed, 0);
}

GridSample scaled(const GridSample& s, double factor) {
    GridSample out = s;
    out.values *= factor;
    return out;
}

}  // namespace

TEST_CASE("rho vanishes on identical lifts") {
    const GridSample s = brownian_sample(5, 2, 101);
    const DyadicLift a = rough::lift_dyadic(s, 3, 5);
    const MetricParams mp = params(2.5, 2.0, 5);
    for (int i = 1; i <= 3; ++i) CHECK(rough::rho(a, a, i, mp) == 0.0);
}

TEST_CASE("rho of a straight line matches the closed-form series") {
    Eigen::VectorXd v(1);
    v << 1.25;  // dyadic slope keeps every vertex increment exact
    GridSample s;
    s.level = 6;
    s.dim = 1;
    s.values.resize(65, 1);
    for (int k = 0; k <= 64; ++k) s.values(k, 0) = (k / 64.0) * v(0);

    const MetricParams mp = params(2.5, 2.0, 6);
    const DyadicLift lift = rough::lift_dyadic(s, 3, 6);

    double series = 0.0;
    for (int n = 1; n <= 6; ++n)
        series += std::pow(n, mp.gamma) * std::pow(2.0, n * (1.0 - mp.p));
    const double expect = v(0) * std::pow(series, 1.0 / mp.p);
    CHECK(rough::rho(lift, 1, mp) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("rho scales with the dilation grading") {
    const GridSample s = brownian_sample(5, 2, 103);
    const MetricParams mp = params(2.5, 2.0, 5);
    const DyadicLift a = rough::lift_dyadic(s, 3, 5);
    const DyadicLift b = rough::lift_dyadic(s, 4, 5);
    for (double eps : {0.5, 2.0}) {
        const GridSample se = scaled(s, eps);
        const DyadicLift ae = rough::lift_dyadic(se, 3, 5);
        const DyadicLift be = rough::lift_dyadic(se, 4, 5);
        for (int i = 1; i <= 3; ++i) {
            const double direct = rough::rho(ae, be, i, mp);
            const double graded = std::pow(eps, i) * rough::rho(a, b, i, mp);
            CHECK(direct == doctest::Approx(graded).epsilon(1e-10));
        }
    }
}

TEST_CASE("rho is a symmetric pseudometric on each level") {
    const GridSample s1 = brownian_sample(4, 2, 107);
    const GridSample s2 = brownian_sample(4, 2, 109);
    const GridSample s3 = brownian_sample(4, 2, 113);
    const MetricParams mp = params(3.0, 2.5, 4);
    const DyadicLift a = rough::lift_dyadic(s1, 3, 4);
    const DyadicLift b = rough::lift_dyadic(s2, 3, 4);
    const DyadicLift c = rough::lift_dyadic(s3, 3, 4);
    for (int i = 1; i <= 3; ++i) {
        CHECK(rough::rho(a, b, i, mp) == rough::rho(b, a, i, mp));
        CHECK(rough::rho(a, c, i, mp) <=
              rough::rho(a, b, i, mp) + rough::rho(b, c, i, mp) + 1e-10);
    }
}

TEST_CASE("rho rejects mismatched inputs") {
    const GridSample s2 = brownian_sample(4, 2, 127);
    const GridSample s3 = brownian_sample(4, 3, 127);
    const DyadicLift a = rough::lift_dyadic(s2, 2, 4);
    const DyadicLift b = rough::lift_dyadic(s3, 2, 4);
    CHECK_THROWS_AS(rough::rho(a, b, 1, params(2.5, 2.0, 4)), rough::ConfigError);
    CHECK_THROWS_AS(rough::rho(a, a, 1, params(2.5, 2.0, 6)), rough::ConfigError);
    CHECK_THROWS_AS(rough::rho(a, a, 1, params(4.5, 4.0, 4)), rough::ConfigError);
    CHECK_THROWS_AS(rough::rho(a, a, 1, params(2.5, 1.0, 4)), rough::ConfigError);
    CHECK_THROWS_AS(rough::rho(a, a, 0, params(2.5, 2.0, 4)), rough::ConfigError);
}

TEST_CASE("p-variation distance vanishes on identical lifts") {
    const GridSample s = brownian_sample(4, 2, 131);
    const DyadicLift a = rough::lift_dyadic(s, 3, 4);
    CHECK(rough::dp_exact(a, a, params(2.5, 2.0, 4), 3) == 0.0);
}

TEST_CASE("monotone one-dimensional increments are dominated by one block") {
    GridSample s;
    s.level = 3;
    s.dim = 1;
    s.values.resize(9, 1);
    s.values << 0.0, 0.125, 0.25, 0.5, 0.625, 0.8125, 0.875, 0.9375, 1.0;
    const DyadicLift a = rough::lift_dyadic(s, 3, 3);
    const DyadicLift b = DyadicLift::trivial(1, 3);
    CHECK(rough::dp_exact(a, b, params(2.5, 2.0, 3), 3) == 1.0);
}

TEST_CASE("interval DP equals exhaustive partition enumeration") {
    for (int rep = 0; rep < 10; ++rep) {
        const int dim = 1 + rep % 3;
        const GridSample s1 = brownian_sample(4, dim, 1000 + rep);
        const GridSample s2 = brownian_sample(4, dim, 2000 + rep);
        const DyadicLift a = rough::lift_dyadic(s1, 3, 4);
        const DyadicLift b = rough::lift_dyadic(s2, 3, 4);
        const MetricParams mp = params(2.5 + 0.1 * (rep % 4), 2.2 + 0.2 * (rep % 3), 4);
        for (int g = 0; g <= 3; ++g)
            CHECK(rough::dp_exact(a, b, mp, g) == oracle::dp_bruteforce(a, b, mp, g));
    }
}

TEST_CASE("finer grids never shrink the p-variation optimum") {
    const GridSample s1 = brownian_sample(5, 2, 137);
    const GridSample s2 = brownian_sample(5, 2, 139);
    const DyadicLift a = rough::lift_dyadic(s1, 4, 5);
    const DyadicLift b = rough::lift_dyadic(s2, 4, 5);
    const MetricParams mp = params(2.5, 2.0, 5);
    double prev = 0.0;
    for (int g = 0; g <= 5; ++g) {
        const double cur = rough::dp_exact(a, b, mp, g);
        CHECK(cur >= prev - 1e-12 * std::max(1.0, prev));
        prev = cur;
    }
}

TEST_CASE("control bound: the six-term maximum at pinned inputs") {
    rough::HlRhoValues v;
    v.d1 = 1.0;
    v.d2 = 0.0;
    v.d3 = 0.0;
    v.a1 = 1.0;
    v.b1 = 1.0;
    v.a2 = 0.0;
    v.b2 = 0.0;
    MetricParams mp = params(2.5, 2.0, 4);
    CHECK(rough::hl_bound(v, mp) == 4.0);

    mp.hl_constant = 2.5;
    CHECK(rough::hl_bound(v, mp) == 10.0);

    rough::HlRhoValues zero;
    CHECK(rough::hl_bound(zero, mp) == 0.0);
}

TEST_CASE("control bound calibration is stable across fresh batches") {
    const MetricParams mp = params(2.5, 2.0, 6);
    const auto max_ratio = [&](std::uint64_t seed0) {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const GridSample s = brownian_sample(7, 2, seed0 + i);
            const int m = 3 + i % 4;
            const DyadicLift a = rough::lift_dyadic(s, m, 6);
            const DyadicLift b = rough::lift_dyadic(s, m + 1, 6);
            const double dp = rough::dp_exact(a, b, mp, 6);
            const double bound = rough::hl_bound(rough::hl_rho_values(a, b, mp), mp);
            if (bound > 0.0) worst = std::max(worst, dp / bound);
        }
        return worst;
    };
    const double c1 = max_ratio(5000);
    const double c2 = max_ratio(9000);
    CHECK(c1 > 0.0);
    CHECK(c2 / c1 > 0.8);
    CHECK(c2 / c1 < 1.25);

    // with hl_constant set to the calibrated ratio, the bound dominates dp
    MetricParams calibrated = mp;
    calibrated.hl_constant = c1;
    const GridSample s = brownian_sample(7, 2, 5003);
    const DyadicLift a = rough::lift_dyadic(s, 4, 6);
    const DyadicLift b = rough::lift_dyadic(s, 5, 6);
    CHECK(rough::dp_exact(a, b, mp, 6) <=
          rough::hl_bound(rough::hl_rho_values(a, b, mp), calibrated) * (1.0 + 1e-12));
}
