#pragma once

// Capacity and large-deviation estimates: moment bounds for polynomials of
// Gaussians, tail capacity bounds with explicit dyadic rates, the explicit
// one-dimensional capacity sandwich, and finite-dimensional rate functions.

#include <Eigen/Dense>

#include <vector>

namespace rough {

// Degree / derivative-order / integrability triple for Sobolev-style bounds.
struct SobolevIndex {
    int degree = 0;      // N, polynomial degree bound
    int derivative = 0;  // i, 0 <= i <= N
    double q = 3.0;      // integrability, must exceed 2

    void validate() const;
};

// ||F||_q <= (N+1) (q-1)^{N/2} ||F||_2 for degree-N polynomials of Gaussians.
double poly_q_norm_bound(int degree, double q, double l2_norm);

// ||D^i F||_2 <= N^{(i+1)/2} ||F||_2; i = 0 returns the plain L2 norm.
double poly_derivative_bound(int degree, int derivative, double l2_norm);

enum class TailKind { difference, single };

struct TailParams {
    double h = 0.5;      // long-memory exponent
    double p = 2.5;      // variation exponent
    double theta = 0.1;  // must lie in ((p(2h+1)/6 - 1)^+, hp - 1)
    int n_tilde = 4;     // Chebyshev order, > max(N/2, 1/(2(h - (theta+1)/p)))
    int degree = 2;      // N
    int level = 1;       // tensor level i in {1,2,3}
    int m = 4;           // dyadic approximation level
    double lambda = 1.0; // threshold
    double c1 = 1.0;     // leading constants; defaults suit relative-rate studies
    double c2 = 1.0;

    void validate() const;
};

double theta_interval_lo(double h, double p);
double theta_interval_hi(double h, double p);
double theta_midpoint(double h, double p);

// Smallest integer satisfying the n_tilde constraint.
int n_tilde_min(double h, double p, double theta, int degree);

// LDP-mode Chebyshev order: ceil(eps^-2).
int n_tilde_for_eps(double eps);

// C_i lambda^{-2n_tilde} (2^{-m})^{2 i n_tilde (h - (theta+1)/p) - 1} for the
// difference kind; the single kind drops the dyadic factor. C_i is
// c1 * c2^n_tilde * g(n_tilde) * n_tilde^{i n_tilde} with g a degree-(N+1)
// polynomial with unit coefficients.
double tail_capacity_bound(TailKind kind, const TailParams& params);
double tail_capacity_bound_log(TailKind kind, const TailParams& params);

// Dyadic decay exponent 2 i n_tilde (h - (theta+1)/p) - 1 of the difference
// bound; the bound is summable over m exactly when it is positive.
double tail_decay_exponent(const TailParams& params);
bool tail_summable_analytic(const TailParams& params);
bool tail_summable_geometric(const TailParams& params);

// Explicit capacity upper bound for the event {eps x > b} on the line:
//   sum_{i=0}^{N} (lambda eps)^i exp((q/2)(lambda eps)^2 - lambda b),
// minimized at lambda = b / (q eps^2) when lambda <= 0 is passed.
// Valid for q > 1; the capacity context itself requires q > 2.
double capacity_upper_1d(double b, double eps, double q, int degree, double lambda = 0.0);
double capacity_upper_1d_log(double b, double eps, double q, int degree, double lambda = 0.0);

// Cap >= P^{1/q}.
double capacity_lower_from_prob(double prob, double q);

// ln P(Z > y) for a standard normal; asymptotic series above y = 10 so the
// value stays finite long after exp would underflow.
double gaussian_tail_log(double y);

// Finite-dimensional rate function J(y) = 1/2 y' Sigma^{-1} y, evaluated via
// a Cholesky solve; Sigma is never inverted explicitly.
double rate_fd(const Eigen::VectorXd& y, const Eigen::MatrixXd& sigma);

// Cameron-Martin energy 1/2 sum_k |dx_k|^2 / dt_k of a piecewise-linear path.
double cm_energy_bm(const Eigen::VectorXd& times, const Eigen::MatrixXd& path);

// eps^2 log extrapolation. sequence[j] = eps[j]^2 * log(value[j]); the limit
// comes from constant extraction over the three smallest eps with basis
// {1, eps^2, eps^2 log(1/eps)}, a Richardson-style elimination of the two
// leading corrections. residual_rms measures the fit on all points.
struct SlopeFit {
    std::vector<double> sequence;
    double limit = 0.0;
    double residual_rms = 0.0;
};

SlopeFit ldp_slope_fit(const std::vector<double>& eps, const std::vector<double>& values);
SlopeFit ldp_slope_fit_log(const std::vector<double>& eps,
                           const std::vector<double>& log_values);

}  // namespace rough
