#include <cmath>
#include <vector>

#include "doctest.h"
#include "rough/capacity.hpp"
#include "rough/errors.hpp"
#include "rough/rng.hpp"

using rough::TailKind;
using rough::TailParams;

namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Trapezoid quadrature of f against the standard normal density on [lo, hi].
template <typename F>
double gauss_quad(const F& f, double lo, double hi, int n) {
    double acc = 0.5 * (f(lo) * normal_pdf(lo) + f(hi) * normal_pdf(hi));
    const double step = (hi - lo) / n;
    for (int j = 1; j < n; ++j) {
        const double x = lo + j * step;
        acc += f(x) * normal_pdf(x);
    }
    return acc * step;
}

TailParams base_params() {
    TailParams tp;
    tp.h = 0.5;
    tp.p = 2.5;
    tp.theta = 0.125;
    tp.n_tilde = 11;
    tp.degree = 2;
    tp.level = 1;
    tp.m = 4;
    tp.lambda = 1.0;
    return tp;
}

}  // namespace

TEST_CASE("polynomial q-norm bound: degree-0 identity and pinned value") {
    CHECK(rough::poly_q_norm_bound(0, 3.0, 2.7) == doctest::Approx(2.7).epsilon(1e-15));
    CHECK(rough::poly_q_norm_bound(2, 5.0, 1.0) == doctest::Approx(12.0).epsilon(1e-14));
    CHECK_THROWS_AS(rough::poly_q_norm_bound(2, 2.0, 1.0), rough::ConfigError);
    CHECK_THROWS_AS(rough::poly_q_norm_bound(-1, 3.0, 1.0), rough::ConfigError);
}

TEST_CASE("polynomial q-norm bound dominates a quadratic Gaussian functional") {
    // F(x) = x^2 - 1 under the standard Gaussian; ||F||_2 = sqrt(2)
    const double l2 = std::sqrt(2.0);
    for (double q : {3.0, 4.0, 6.0}) {
        const double moment =
            gauss_quad([&](double x) { return std::pow(std::abs(x * x - 1.0), q); },
                       -14.0, 14.0, 400000);
        const double lq = std::pow(moment, 1.0 / q);
        CHECK(lq <= rough::poly_q_norm_bound(2, q, l2));
    }
}

TEST_CASE("derivative bound: order zero passes through, pinned value, guards") {
    CHECK(rough::poly_derivative_bound(3, 0, 1.7) == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(rough::poly_derivative_bound(4, 1, 2.0) == doctest::Approx(8.0).epsilon(1e-14));
    // F(x) = x^2: ||F||_2 = sqrt(3), ||DF||_2 = 2 <= 2 * sqrt(3)
    CHECK(2.0 <= rough::poly_derivative_bound(2, 1, std::sqrt(3.0)));
    CHECK_THROWS_AS(rough::poly_derivative_bound(2, 3, 1.0), rough::ConfigError);
}

TEST_CASE("theta interval endpoints and midpoint") {
    CHECK(rough::theta_interval_lo(0.5, 2.5) == 0.0);
    CHECK(rough::theta_interval_hi(0.5, 2.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(rough::theta_midpoint(0.5, 2.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(rough::theta_interval_lo(0.5, 3.9) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(rough::theta_interval_hi(0.5, 3.9) == doctest::Approx(0.95).epsilon(1e-14));
}

TEST_CASE("Chebyshev order floors") {
    CHECK(rough::n_tilde_min(0.5, 2.5, 0.125, 2) == 11);
    CHECK(rough::n_tilde_for_eps(0.1) == 100);
    CHECK(rough::n_tilde_for_eps(0.3) == 12);
    CHECK(rough::n_tilde_for_eps(0.05) == 400);
}

TEST_CASE("tail parameter validation names the violated constraint") {
    TailParams tp = base_params();
    CHECK_NOTHROW(tp.validate());

    tp.theta = 0.30;  // above hp - 1 = 0.25
    CHECK_THROWS_AS(tp.validate(), rough::ConfigError);
    tp = base_params();
    tp.n_tilde = 10;  // bound requires > 10
    CHECK_THROWS_AS(tp.validate(), rough::ConfigError);
    tp = base_params();
    tp.lambda = 0.0;
    CHECK_THROWS_AS(tp.validate(), rough::ConfigError);
    tp = base_params();
    tp.level = 4;
    CHECK_THROWS_AS(tp.validate(), rough::ConfigError);
}

TEST_CASE("tail bound power laws in the threshold and the dyadic level") {
    const TailParams tp = base_params();
    TailParams tp2 = tp;
    tp2.lambda = 2.0 * tp.lambda;
    const double drop_lambda =
        rough::tail_capacity_bound_log(TailKind::difference, tp2) -
        rough::tail_capacity_bound_log(TailKind::difference, tp);
    CHECK(drop_lambda ==
          doctest::Approx(-2.0 * tp.n_tilde * std::log(2.0)).epsilon(1e-12));

    TailParams tp3 = tp;
    tp3.m = tp.m + 1;
    const double drop_m = rough::tail_capacity_bound_log(TailKind::difference, tp3) -
                          rough::tail_capacity_bound_log(TailKind::difference, tp);
    const double expo = rough::tail_decay_exponent(tp);
    CHECK(drop_m == doctest::Approx(-expo * std::log(2.0)).epsilon(1e-12));

    // the single kind carries no dyadic factor
    CHECK(rough::tail_capacity_bound_log(TailKind::single, tp3) ==
          rough::tail_capacity_bound_log(TailKind::single, tp));

    // plain and log forms agree where exp stays in range
    CHECK(rough::tail_capacity_bound(TailKind::difference, tp) ==
          doctest::Approx(std::exp(rough::tail_capacity_bound_log(TailKind::difference, tp)))
              .epsilon(1e-12));
}

TEST_CASE("dyadic decay exponent matches the explicit arithmetic") {
    const TailParams tp = base_params();
    const double direct = 2.0 * tp.level * tp.n_tilde * (tp.h - (tp.theta + 1.0) / tp.p) - 1.0;
    CHECK(rough::tail_decay_exponent(tp) == direct);
}

TEST_CASE("analytic summability agrees with the geometric-series test") {
    TailParams tp = base_params();
    for (int i = 1; i <= 3; ++i)
        for (int nt : {11, 12, 20, 40})
            for (double theta : {0.01, 0.125, 0.2, 0.2399}) {
                tp.level = i;
                tp.n_tilde = nt;
                tp.theta = theta;
                CHECK(rough::tail_summable_analytic(tp) == rough::tail_summable_geometric(tp));
            }
}

TEST_CASE("one-dimensional upper bound: exact slope at degree zero") {
    for (double b : {1.0, 2.0})
        for (double q : {3.0, 4.0})
            for (double eps : {0.1, 0.025}) {
                const double lg = rough::capacity_upper_1d_log(b, eps, q, 0);
                CHECK(eps * eps * lg ==
                      doctest::Approx(-b * b / (2.0 * q)).epsilon(1e-12));
            }
}

TEST_CASE("one-dimensional upper bound decreases in the threshold") {
    const double a = rough::capacity_upper_1d(0.5, 0.1, 3.0, 2);
    const double b = rough::capacity_upper_1d(1.0, 0.1, 3.0, 2);
    const double c = rough::capacity_upper_1d(2.0, 0.1, 3.0, 2);
    CHECK(a > b);
    CHECK(b > c);
}

TEST_CASE("one-dimensional upper bound matches quadrature of the proof integral") {
    const double b = 1.0, q = 3.0, eps = 0.1;
    const int degree = 2;
    const double lambda = b / (q * eps * eps);
    const double le = lambda * eps;
    // each term is ((lambda eps)^{qi} E[e^{q lambda eps x - q lambda b}])^{1/q}
    double total = 0.0;
    for (int i = 0; i <= degree; ++i) {
        const double integral = gauss_quad(
            [&](double x) { return std::exp(q * le * x - q * lambda * b); },
            -10.0, 24.0, 800000);
        total += std::pow(std::pow(le, q * i) * integral, 1.0 / q);
    }
    CHECK(rough::capacity_upper_1d(b, eps, q, degree) ==
          doctest::Approx(total).epsilon(1e-6));
}

TEST_CASE("probability lower bound endpoints") {
    CHECK(rough::capacity_lower_from_prob(1.0, 3.0) == 1.0);
    CHECK(rough::capacity_lower_from_prob(0.0, 3.0) == 0.0);
    CHECK(rough::capacity_lower_from_prob(0.125, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("the capacity sandwich orders correctly for small scalings") {
    for (double b : {0.5, 1.0, 2.0})
        for (double eps : {0.2, 0.1})
            for (double q : {2.5, 3.0, 4.0})
                for (int degree = 0; degree <= 5; ++degree) {
                    const double prob = std::exp(rough::gaussian_tail_log(b / eps));
                    const double lower = rough::capacity_lower_from_prob(prob, q);
                    const double upper = rough::capacity_upper_1d(b, eps, q, degree);
                    CHECK(lower <= upper);
                }
}

TEST_CASE("log Gaussian tail agrees with erfc and survives deep arguments") {
    for (double y : {0.5, 2.0, 5.0, 8.0, 12.0, 20.0}) {
        const double direct = std::log(0.5 * std::erfc(y / std::sqrt(2.0)));
        CHECK(rough::gaussian_tail_log(y) == doctest::Approx(direct).epsilon(1e-9));
    }
    // far beyond erfc underflow the log must stay finite and ordered
    const double a = rough::gaussian_tail_log(40.0);
    const double b = rough::gaussian_tail_log(50.0);
    CHECK(std::isfinite(a));
    CHECK(b < a);
}

TEST_CASE("finite-dimensional rate: pinned value, homogeneity, solve oracle") {
    Eigen::VectorXd y(2);
    y << 3.0, 4.0;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
    CHECK(rough::rate_fd(y, eye) == doctest::Approx(12.5).epsilon(1e-14));
    CHECK(rough::rate_fd(Eigen::VectorXd::Zero(2), eye) == 0.0);
    CHECK(rough::rate_fd(2.0 * y, eye) == doctest::Approx(4.0 * 12.5).epsilon(1e-12));

    // random SPD system checked against hand-rolled Gaussian elimination
    rough::RandomStream rng(404, 0);
    const int n = 5;
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    const Eigen::MatrixXd sigma = g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = rng.normal();

    std::vector<std::vector<double>> aug(n, std::vector<double>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = sigma(i, j);
        aug[i][n] = z(i);
    }
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
        std::swap(aug[col], aug[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = aug[r][col] / aug[col][col];
            for (int j = col; j <= n; ++j) aug[r][j] -= f * aug[col][j];
        }
    }
    double expect = 0.0;
    for (int i = 0; i < n; ++i) expect += z(i) * (aug[i][n] / aug[i][i]);
    expect *= 0.5;
    CHECK(rough::rate_fd(z, sigma) == doctest::Approx(expect).epsilon(1e-6));

    const Eigen::MatrixXd bad = -eye;
    CHECK_THROWS_AS(rough::rate_fd(y, bad), rough::NumericError);
}

TEST_CASE("Cameron-Martin energy of grid paths") {
    const int n = 1 << 10;
    Eigen::VectorXd times(n + 1);
    Eigen::MatrixXd line(n + 1, 1), zero(n + 1, 1), sine(n + 1, 1);
    for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / n;
        times(k) = t;
        line(k, 0) = t;
        zero(k, 0) = 0.0;
        sine(k, 0) = std::sin(M_PI * t);
    }
    CHECK(rough::cm_energy_bm(times, line) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rough::cm_energy_bm(times, zero) == 0.0);
    CHECK(std::abs(rough::cm_energy_bm(times, sine) - 2.4674011002723395) < 1e-3);
}

TEST_CASE("eps^2 log extrapolation recovers exact exponential rates") {
    // rate 0.2 keeps exp(-rate/eps^2) above the double underflow threshold
    // at the smallest eps
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> pure(eps.size()), prefab(eps.size());
    for (std::size_t j = 0; j < eps.size(); ++j) {
        pure[j] = std::exp(-0.2 / (eps[j] * eps[j]));
        prefab[j] = eps[j] * std::exp(-0.2 / (eps[j] * eps[j]));
    }
    const rough::SlopeFit f1 = rough::ldp_slope_fit(eps, pure);
    CHECK(f1.limit == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(f1.sequence[0] ==
          doctest::Approx(eps[0] * eps[0] * std::log(pure[0])).epsilon(1e-14));

    const rough::SlopeFit f2 = rough::ldp_slope_fit(eps, prefab);
    CHECK(f2.limit == doctest::Approx(-0.2).epsilon(1e-9));

    std::vector<double> ub(eps.size());
    for (std::size_t j = 0; j < eps.size(); ++j)
        ub[j] = rough::capacity_upper_1d(1.0, eps[j], 2.0, 3);
    const rough::SlopeFit f3 = rough::ldp_slope_fit(eps, ub);
    CHECK(std::abs(f3.limit - (-0.25)) < 0.05 * 0.25);

    CHECK_THROWS_AS(rough::ldp_slope_fit({0.1, 0.05}, {1.0, 1.0}), rough::ConfigError);
    CHECK_THROWS_AS(rough::ldp_slope_fit({0.2, 0.1, 0.05}, {1.0, 0.0, 1.0}),
                    rough::ConfigError);
}
