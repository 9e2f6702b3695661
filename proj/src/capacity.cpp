#include "rough/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rough/errors.hpp"

namespace rough {

void SobolevIndex::validate() const {
    if (degree < 0) throw ConfigError("degree must be >= 0");
    if (derivative < 0 || derivative > degree)
        throw ConfigError("derivative order must lie in [0, degree]");
    if (!(q > 2.0)) throw ConfigError("q must exceed 2");
}

double poly_q_norm_bound(int degree, double q, double l2_norm) {
    if (degree < 0) throw ConfigError("poly_q_norm_bound: degree must be >= 0");
    if (!(q > 2.0)) throw ConfigError("poly_q_norm_bound: q must exceed 2");
    if (!(l2_norm >= 0.0)) throw ConfigError("poly_q_norm_bound: negative l2 norm");
    return (degree + 1) * std::pow(q - 1.0, 0.5 * degree) * l2_norm;
}

double poly_derivative_bound(int degree, int derivative, double l2_norm) {
    if (degree < 0) throw ConfigError("poly_derivative_bound: degree must be >= 0");
    if (derivative < 0 || derivative > degree)
        throw ConfigError("poly_derivative_bound: derivative order must lie in [0, degree]");
    if (!(l2_norm >= 0.0)) throw ConfigError("poly_derivative_bound: negative l2 norm");
    if (derivative == 0) return l2_norm;
    return std::pow(static_cast<double>(degree), 0.5 * (derivative + 1)) * l2_norm;
}

double theta_interval_lo(double h, double p) {
    return std::max(0.0, p * (2.0 * h + 1.0) / 6.0 - 1.0);
}

double theta_interval_hi(double h, double p) { return h * p - 1.0; }

double theta_midpoint(double h, double p) {
    return 0.5 * (theta_interval_lo(h, p) + theta_interval_hi(h, p));
}

void TailParams::validate() const {
    if (!(h > 0.25) || !(h <= 1.0)) throw ConfigError("h must lie in (0.25, 1]");
    if (!(p > 2.0) || !(p < 4.0)) throw ConfigError("p must lie in (2, 4)");
    if (!(h * p > 1.0)) throw ConfigError("violates hp > 1");
    const double lo = theta_interval_lo(h, p);
    const double hi = theta_interval_hi(h, p);
    if (!(theta > lo))
        throw ConfigError("theta = " + std::to_string(theta) +
                          " violates theta > (p(2h+1)/6 - 1)^+ = " + std::to_string(lo));
    if (!(theta < hi))
        throw ConfigError("theta = " + std::to_string(theta) +
                          " violates theta < hp - 1 = " + std::to_string(hi));
    const double gap = h - (theta + 1.0) / p;
    const double min_nt = std::max(0.5 * degree, 0.5 / gap);
    if (!(static_cast<double>(n_tilde) > min_nt))
        throw ConfigError("n_tilde = " + std::to_string(n_tilde) +
                          " violates n_tilde > max(N/2, 1/(2(h - (theta+1)/p))) = " +
                          std::to_string(min_nt));
    if (degree < 0) throw ConfigError("degree must be >= 0");
    if (level < 1 || level > 3) throw ConfigError("level must be 1, 2 or 3");
    if (m < 0) throw ConfigError("m must be >= 0");
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw ConfigError("c1, c2 must be positive");
}

int n_tilde_min(double h, double p, double theta, int degree) {
    const double gap = h - (theta + 1.0) / p;
    if (!(gap > 0.0)) throw ConfigError("n_tilde_min: theta admits no valid n_tilde");
    const double bound = std::max(0.5 * degree, 0.5 / gap);
    return static_cast<int>(std::floor(bound)) + 1;
}

int n_tilde_for_eps(double eps) {
    if (!(eps > 0.0)) throw ConfigError("n_tilde_for_eps: eps must be positive");
    return static_cast<int>(std::ceil(1.0 / (eps * eps)));
}

double tail_decay_exponent(const TailParams& params) {
    return 2.0 * params.level * params.n_tilde * (params.h - (params.theta + 1.0) / params.p) -
           1.0;
}

double tail_capacity_bound_log(TailKind kind, const TailParams& params) {
    params.validate();
    const double nt = static_cast<double>(params.n_tilde);
    // g(n_tilde) = sum_{j=0}^{N+1} n_tilde^j
    double g = 0.0;
    for (int j = 0; j <= params.degree + 1; ++j) g += std::pow(nt, j);
    double log_bound = std::log(params.c1) + nt * std::log(params.c2) + std::log(g) +
                       params.level * nt * std::log(nt) -
                       2.0 * nt * std::log(params.lambda);
    if (kind == TailKind::difference)
        log_bound += tail_decay_exponent(params) * params.m * std::log(0.5);
    return log_bound;
}

double tail_capacity_bound(TailKind kind, const TailParams& params) {
    return std::exp(tail_capacity_bound_log(kind, params));
}

bool tail_summable_analytic(const TailParams& params) {
    return 2.0 * params.level * params.n_tilde *
               (params.h - (params.theta + 1.0) / params.p) >
           1.0;
}

bool tail_summable_geometric(const TailParams& params) {
    // Ratio of consecutive m terms of the difference bound.
    const double ratio = std::exp2(-tail_decay_exponent(params));
    return ratio < 1.0;
}

double capacity_upper_1d_log(double b, double eps, double q, int degree, double lambda) {
    if (!(b > 0.0) || !(eps > 0.0)) throw ConfigError("capacity_upper_1d: b, eps must be positive");
    if (!(q > 1.0)) throw ConfigError("capacity_upper_1d: q must exceed 1");
    if (degree < 0) throw ConfigError("capacity_upper_1d: degree must be >= 0");
    if (lambda <= 0.0) lambda = b / (q * eps * eps);
    const double x = lambda * eps;
    double s = 0.0;
    for (int i = 0; i <= degree; ++i) s += std::pow(x, i);
    return std::log(s) + 0.5 * q * x * x - lambda * b;
}

double capacity_upper_1d(double b, double eps, double q, int degree, double lambda) {
    return std::exp(capacity_upper_1d_log(b, eps, q, degree, lambda));
}

double capacity_lower_from_prob(double prob, double q) {
    if (!(prob >= 0.0) || !(prob <= 1.0))
        throw ConfigError("capacity_lower_from_prob: prob must lie in [0, 1]");
    if (!(q > 1.0)) throw ConfigError("capacity_lower_from_prob: q must exceed 1");
    return std::pow(prob, 1.0 / q);
}

double gaussian_tail_log(double y) {
    if (y < 10.0) return std::log(0.5 * std::erfc(y / std::sqrt(2.0)));
    // P(Z > y) = phi(y)/y (1 - 1/y^2 + 3/y^4 - 15/y^6 + 105/y^8 - ...)
    constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
    const double y2 = y * y;
    const double series = 1.0 - 1.0 / y2 + 3.0 / (y2 * y2) - 15.0 / (y2 * y2 * y2) +
                          105.0 / (y2 * y2 * y2 * y2);
    return -0.5 * y2 - std::log(y) - 0.5 * kLogTwoPi + std::log(series);
}

double rate_fd(const Eigen::VectorXd& y, const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() != y.size())
        throw ConfigError("rate_fd: dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw NumericError("rate_fd: covariance is not positive definite");
    return 0.5 * y.dot(llt.solve(y));
}

double cm_energy_bm(const Eigen::VectorXd& times, const Eigen::MatrixXd& path) {
    if (times.size() != path.rows() || times.size() < 2)
        throw ConfigError("cm_energy_bm: need matching times and path with >= 2 rows");
    double e = 0.0;
    for (int k = 0; k + 1 < times.size(); ++k) {
        const double dt = times[k + 1] - times[k];
        if (!(dt > 0.0)) throw ConfigError("cm_energy_bm: times must be strictly increasing");
        e += (path.row(k + 1) - path.row(k)).squaredNorm() / dt;
    }
    return 0.5 * e;
}

namespace {

SlopeFit slope_fit_impl(const std::vector<double>& eps, std::vector<double> seq) {
    if (eps.size() != seq.size() || eps.size() < 3)
        throw ConfigError("ldp_slope_fit: need at least 3 (eps, value) rows");
    for (double e : eps)
        if (!(e > 0.0)) throw ConfigError("ldp_slope_fit: eps must be positive");

    // Pick the three smallest eps and solve exactly for the constant in
    // s = L + A eps^2 + B eps^2 log(1/eps).
    std::vector<std::size_t> idx(eps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return eps[a] < eps[b];
    });
    Eigen::Matrix3d A;
    Eigen::Vector3d rhs;
    for (int r = 0; r < 3; ++r) {
        const double e = eps[idx[r]];
        A(r, 0) = 1.0;
        A(r, 1) = e * e;
        A(r, 2) = e * e * std::log(1.0 / e);
        rhs[r] = seq[idx[r]];
    }
    const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(rhs);

    SlopeFit fit;
    fit.limit = coef[0];
    double rss = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double e = eps[i];
        const double model = coef[0] + coef[1] * e * e + coef[2] * e * e * std::log(1.0 / e);
        rss += (seq[i] - model) * (seq[i] - model);
    }
    fit.residual_rms = std::sqrt(rss / static_cast<double>(eps.size()));
    fit.sequence = std::move(seq);
    return fit;
}

}  // namespace

SlopeFit ldp_slope_fit(const std::vector<double>& eps, const std::vector<double>& values) {
    std::vector<double> seq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) throw ConfigError("ldp_slope_fit: values must be positive");
        seq[i] = eps[i] * eps[i] * std::log(values[i]);
    }
    return slope_fit_impl(eps, std::move(seq));
}

SlopeFit ldp_slope_fit_log(const std::vector<double>& eps,
                           const std::vector<double>& log_values) {
    std::vector<double> seq(log_values.size());
    for (std::size_t i = 0; i < log_values.size(); ++i)
        seq[i] = eps[i] * eps[i] * log_values[i];
    return slope_fit_impl(eps, std::move(seq));
}

}  // namespace rough
