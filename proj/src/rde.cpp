#include "rough/rde.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "rough/errors.hpp"

namespace rough {

namespace {

constexpr int kMaxDegree = 3;

double eval_term(const PolyTerm& t, const Eigen::VectorXd& x) {
    double v = t.coeff;
    for (int j = 0; j < static_cast<int>(t.exponents.size()); ++j)
        for (int e = 0; e < t.exponents[j]; ++e) v *= x[j];
    return v;
}

// Partial derivative of one monomial with respect to x_c.
double eval_term_partial(const PolyTerm& t, const Eigen::VectorXd& x, int c) {
    const int ec = t.exponents[c];
    if (ec == 0) return 0.0;
    double v = t.coeff * ec;
    for (int e = 0; e < ec - 1; ++e) v *= x[c];
    for (int j = 0; j < static_cast<int>(t.exponents.size()); ++j) {
        if (j == c) continue;
        for (int e = 0; e < t.exponents[j]; ++e) v *= x[j];
    }
    return v;
}

}  // namespace

VectorFieldSet::VectorFieldSet(int state_dim, int drive_dim)
    : state_dim_(state_dim), drive_dim_(drive_dim) {
    if (state_dim < 1) throw ConfigError("state dimension must be >= 1");
    if (drive_dim < 1) throw ConfigError("drive dimension must be >= 1");
    terms_.assign(drive_dim, std::vector<std::vector<PolyTerm>>(state_dim));
}

void VectorFieldSet::add_term(int alpha, int comp, double coeff, std::vector<int> exponents) {
    if (alpha < 0 || alpha >= drive_dim_) throw ConfigError("field index out of range");
    if (comp < 0 || comp >= state_dim_) throw ConfigError("component index out of range");
    if (static_cast<int>(exponents.size()) != state_dim_)
        throw ConfigError("exponent vector must have one entry per state variable");
    if (!std::isfinite(coeff)) throw ConfigError("field coefficients must be finite");
    int degree = 0;
    for (int e : exponents) {
        if (e < 0) throw ConfigError("exponents must be nonnegative");
        degree += e;
    }
    if (degree > kMaxDegree)
        throw ConfigError("field monomial degree " + std::to_string(degree) +
                          " exceeds the limit of " + std::to_string(kMaxDegree));
    terms_[alpha][comp].push_back(PolyTerm{coeff, std::move(exponents)});
}

const std::vector<PolyTerm>& VectorFieldSet::terms(int alpha, int comp) const {
    if (alpha < 0 || alpha >= drive_dim_) throw ConfigError("field index out of range");
    if (comp < 0 || comp >= state_dim_) throw ConfigError("component index out of range");
    return terms_[alpha][comp];
}

Eigen::MatrixXd VectorFieldSet::eval(const Eigen::VectorXd& x) const {
    if (static_cast<int>(x.size()) != state_dim_)
        throw ConfigError("state vector has wrong dimension");
    Eigen::MatrixXd out(state_dim_, drive_dim_);
    for (int a = 0; a < drive_dim_; ++a)
        for (int r = 0; r < state_dim_; ++r) {
            double v = 0.0;
            for (const PolyTerm& t : terms_[a][r]) v += eval_term(t, x);
            out(r, a) = v;
        }
    return out;
}

Eigen::MatrixXd VectorFieldSet::jacobian(int alpha, const Eigen::VectorXd& x) const {
    if (alpha < 0 || alpha >= drive_dim_) throw ConfigError("field index out of range");
    if (static_cast<int>(x.size()) != state_dim_)
        throw ConfigError("state vector has wrong dimension");
    Eigen::MatrixXd out(state_dim_, state_dim_);
    for (int r = 0; r < state_dim_; ++r)
        for (int c = 0; c < state_dim_; ++c) {
            double v = 0.0;
            for (const PolyTerm& t : terms_[alpha][r]) v += eval_term_partial(t, x, c);
            out(r, c) = v;
        }
    return out;
}

std::vector<PolyTerm> parse_polynomial(const std::string& text, int state_dim) {
    if (state_dim < 1) throw ConfigError("parse_polynomial: state_dim must be >= 1");
    std::vector<PolyTerm> out;
    std::size_t i = 0;
    const auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    if (i == text.size()) return out;  // empty text is the zero polynomial

    while (true) {
        skip();
        double sign = 1.0;
        bool saw_sign = false;
        while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            if (text[i] == '-') sign = -sign;
            saw_sign = true;
            ++i;
            skip();
        }
        if (i == text.size()) {
            if (saw_sign) throw ConfigError("polynomial ends with a dangling sign: '" + text + "'");
            break;
        }

        PolyTerm term;
        term.coeff = sign;
        term.exponents.assign(state_dim, 0);
        while (true) {
            skip();
            if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) {
                ++i;
                std::size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                if (j == i)
                    throw ConfigError("expected a variable index after 'x' in '" + text + "'");
                const int idx = std::stoi(text.substr(i, j - i));
                i = j;
                int power = 1;
                skip();
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    skip();
                    j = i;
                    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                        ++j;
                    if (j == i)
                        throw ConfigError("expected an exponent after '^' in '" + text + "'");
                    power = std::stoi(text.substr(i, j - i));
                    i = j;
                }
                if (idx < 1 || idx > state_dim)
                    throw ConfigError("variable x" + std::to_string(idx) +
                                      " is out of range for state dimension " +
                                      std::to_string(state_dim));
                term.exponents[idx - 1] += power;
            } else {
                const char* begin = text.c_str() + i;
                char* end = nullptr;
                const double v = std::strtod(begin, &end);
                if (end == begin)
                    throw ConfigError("cannot parse polynomial factor at '" + text.substr(i) +
                                      "'");
                term.coeff *= v;
                i += static_cast<std::size_t>(end - begin);
            }
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        int degree = 0;
        for (int e : term.exponents) degree += e;
        if (degree > kMaxDegree)
            throw ConfigError("polynomial term degree " + std::to_string(degree) +
                              " exceeds the limit of " + std::to_string(kMaxDegree) + " in '" +
                              text + "'");
        out.push_back(std::move(term));
        skip();
        if (i == text.size()) break;
        if (text[i] != '+' && text[i] != '-')
            throw ConfigError("unexpected character '" + std::string(1, text[i]) +
                              "' in polynomial '" + text + "'");
    }
    return out;
}

Eigen::MatrixXd solve_polyline(const Eigen::VectorXd& x0, const VectorFieldSet& fields,
                               const PiecewisePath& driver, int substeps) {
    if (substeps < 1) throw ConfigError("substeps must be >= 1");
    if (driver.dim() != fields.drive_dim())
        throw ConfigError("driver dimension does not match the number of fields");
    if (static_cast<int>(x0.size()) != fields.state_dim())
        throw ConfigError("x0 dimension does not match the field state dimension");

    const int segments = driver.segments();
    Eigen::MatrixXd out(segments + 1, fields.state_dim());
    Eigen::VectorXd x = x0;
    out.row(0) = x0.transpose();
    const double dt = 1.0 / substeps;
    Eigen::VectorXd k1, k2, k3, k4;
    for (int s = 0; s < segments; ++s) {
        // The driver is straight on this segment, so the controlled equation
        // reduces to the autonomous ODE y' = V(y) * dw in segment time.
        const Eigen::VectorXd dw =
            (driver.vertices.row(s + 1) - driver.vertices.row(s)).transpose();
        for (int step = 0; step < substeps; ++step) {
            k1 = fields.eval(x) * dw;
            k2 = fields.eval(x + (0.5 * dt) * k1) * dw;
            k3 = fields.eval(x + (0.5 * dt) * k2) * dw;
            k4 = fields.eval(x + dt * k3) * dw;
            x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!x.allFinite()) {
                const double t_blow =
                    (static_cast<double>(s) + (step + 1) * dt) / segments;
                throw NumericError("ode state became non-finite (blow-up) near t = " +
                                   std::to_string(t_blow));
            }
        }
        out.row(s + 1) = x.transpose();
    }
    return out;
}

Eigen::MatrixXd solve_along(const Eigen::VectorXd& x0, const VectorFieldSet& fields,
                            const GridSample& sample, int m, int substeps) {
    return solve_polyline(x0, fields, interpolate(sample, m), substeps);
}

std::vector<WzRow> wz_convergence(const Eigen::VectorXd& x0, const VectorFieldSet& fields,
                                  const GridSample& sample, int m_lo, int m_hi, int substeps) {
    if (m_lo < 1 || m_lo > m_hi) throw ConfigError("wz_convergence: bad m range");
    if (m_hi + 1 > sample.level)
        throw ConfigError("wz_convergence: the range needs sample.level >= m_hi + 1");

    std::vector<WzRow> rows;
    rows.reserve(m_hi - m_lo + 1);
    Eigen::MatrixXd prev = solve_along(x0, fields, sample, m_lo, substeps);
    for (int m = m_lo; m <= m_hi; ++m) {
        Eigen::MatrixXd next = solve_along(x0, fields, sample, m + 1, substeps);
        double sup = 0.0;
        for (int k = 0; k < prev.rows(); ++k)
            sup = std::max(sup, (next.row(2 * k) - prev.row(k)).norm());
        rows.push_back({m, sup});
        prev = std::move(next);
    }
    return rows;
}

ProbeReport continuity_probe(const Eigen::VectorXd& x0, const VectorFieldSet& fields,
                             const std::vector<ProbePair>& pairs, int substeps) {
    ProbeReport rep;
    rep.scatter.reserve(pairs.size());
    for (const ProbePair& pr : pairs) {
        if (pr.a.dim() != pr.b.dim())
            throw ConfigError("continuity_probe: paired drivers have different dimensions");
        const Eigen::MatrixXd xa = solve_polyline(x0, fields, pr.a, substeps);
        const Eigen::MatrixXd xb = solve_polyline(x0, fields, pr.b, substeps);
        const int shared = std::min(pr.a.level, pr.b.level);
        const int sa = 1 << (pr.a.level - shared);
        const int sb = 1 << (pr.b.level - shared);
        double sup = 0.0;
        for (int k = 0; k <= (1 << shared); ++k)
            sup = std::max(sup, (xa.row(k * sa) - xb.row(k * sb)).norm());
        rep.scatter.push_back({pr.driver_dp, sup});
        rep.max_modulus = std::max(rep.max_modulus, sup);
    }

    std::vector<ProbePoint> sorted = rep.scatter;
    std::sort(sorted.begin(), sorted.end(),
              [](const ProbePoint& a, const ProbePoint& b) { return a.driver_dp < b.driver_dp; });
    const std::size_t nbins = std::min<std::size_t>(4, sorted.size());
    if (nbins < 2) {
        rep.envelope_ok = rep.max_modulus == 0.0;
        return rep;
    }
    for (std::size_t b = 0; b < nbins; ++b) {
        const std::size_t lo = b * sorted.size() / nbins;
        const std::size_t hi = (b + 1) * sorted.size() / nbins;
        double env = 0.0;
        for (std::size_t k = lo; k < hi; ++k) env = std::max(env, sorted[k].solution_dist);
        rep.envelope_dp.push_back(sorted[hi - 1].driver_dp);
        rep.envelope_dist.push_back(env);
    }
    rep.envelope_ok = rep.envelope_dist.front() <= 0.5 * rep.envelope_dist.back();
    return rep;
}

void write_solution_csv(const PiecewisePath& driver, const Eigen::MatrixXd& solution,
                        const std::string& path) {
    if (solution.rows() != driver.segments() + 1)
        throw ConfigError("solution rows do not match the driver vertex count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "t";
    for (int c = 1; c <= solution.cols(); ++c) out << ",x" << c;
    out << "\r\n";
    char buf[32];
    const int segments = driver.segments();
    for (int k = 0; k <= segments; ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(k) / segments);
        out << buf;
        for (int c = 0; c < solution.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", solution(k, c));
            out << ',' << buf;
        }
        out << "\r\n";
    }
}

}  // namespace rough
