#include "rough/metrics.hpp"

#include <cmath>
#include <vector>

#include "rough/errors.hpp"

namespace rough {

void MetricParams::validate() const {
    if (!(p > 2.0) || !(p < 4.0)) throw ConfigError("p must lie in (2, 4)");
    if (!(gamma > p - 1.0)) throw ConfigError("gamma must exceed p - 1");
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    if (!(hl_constant > 0.0)) throw ConfigError("hl_constant must be positive");
}

namespace {

double rho_impl(const DyadicLift& a, const DyadicLift* b, int level, const MetricParams& params) {
    params.validate();
    if (level < 1 || level > 3) throw ConfigError("rho: level must be 1, 2 or 3");
    if (a.n_max() < params.n_max)
        throw ConfigError("rho: lift n_max is below params.n_max");
    if (b) {
        if (b->dim() != a.dim()) throw ConfigError("rho: dimension mismatch");
        if (b->n_max() < params.n_max)
            throw ConfigError("rho: lift n_max is below params.n_max");
    }
    const double q = params.p / level;
    double total = 0.0;
    TruncatedTensor diff(a.dim());
    for (int n = 1; n <= params.n_max; ++n) {
        const double weight = std::pow(static_cast<double>(n), params.gamma);
        double level_sum = 0.0;
        for (int k = 1; k <= (1 << n); ++k) {
            double norm;
            if (b) {
                switch (level) {
                    case 1:
                        norm = (a.node(n, k).level1() - b->node(n, k).level1()).norm();
                        break;
                    case 2:
                        norm = (a.node(n, k).level2() - b->node(n, k).level2()).norm();
                        break;
                    default:
                        norm = (a.node(n, k).level3() - b->node(n, k).level3()).norm();
                }
            } else {
                norm = a.node(n, k).level_norm(level);
            }
            level_sum += std::pow(norm, q);
        }
        total += weight * level_sum;
    }
    return std::pow(total, 1.0 / q);
}

}  // namespace

double rho(const DyadicLift& a, const DyadicLift& b, int level, const MetricParams& params) {
    return rho_impl(a, &b, level, params);
}

double rho(const DyadicLift& a, int level, const MetricParams& params) {
    return rho_impl(a, nullptr, level, params);
}

double dp_exact(const DyadicLift& a, const DyadicLift& b, const MetricParams& params,
                int grid_level) {
    params.validate();
    if (a.dim() != b.dim()) throw ConfigError("dp_exact: dimension mismatch");
    if (grid_level < 0 || grid_level > a.n_max() || grid_level > b.n_max())
        throw ConfigError("dp_exact: grid_level must be <= both n_max");
    if (grid_level > kMaxDpGridLevel)
        throw ConfigError("dp_exact: grid_level exceeds " + std::to_string(kMaxDpGridLevel));

    const int blocks = 1 << grid_level;  // grid nodes 0..blocks
    const int nodes = blocks + 1;

    double best = 0.0;
    std::vector<double> cost(static_cast<std::size_t>(nodes) * nodes, 0.0);
    std::vector<double> dp(nodes, 0.0);
    TruncatedTensor run_a(a.dim()), run_b(b.dim());

    for (int level = 1; level <= 3; ++level) {
        const double q = params.p / level;
        // cost[j1 * nodes + j2]: |difference over [x_j1, x_j2]|^{p/i}, built by
        // sweeping j2 with running Chen products of the stored grid tensors.
        for (int j1 = 0; j1 < blocks; ++j1) {
            run_a = a.node(grid_level, j1 + 1);
            run_b = b.node(grid_level, j1 + 1);
            double norm;
            for (int j2 = j1 + 1; j2 <= blocks; ++j2) {
                if (j2 > j1 + 1) {
                    chen_mul_into(run_a, a.node(grid_level, j2), run_a);
                    chen_mul_into(run_b, b.node(grid_level, j2), run_b);
                }
                switch (level) {
                    case 1: norm = (run_a.level1() - run_b.level1()).norm(); break;
                    case 2: norm = (run_a.level2() - run_b.level2()).norm(); break;
                    default: norm = (run_a.level3() - run_b.level3()).norm();
                }
                cost[static_cast<std::size_t>(j1) * nodes + j2] = std::pow(norm, q);
            }
        }
        // dp[j]: best over partitions of [x_0, x_j]; left-to-right sums so the
        // result matches brute-force enumeration term for term.
        dp[0] = 0.0;
        for (int j = 1; j <= blocks; ++j) {
            double m = 0.0;
            for (int l = 0; l < j; ++l)
                m = std::max(m, dp[l] + cost[static_cast<std::size_t>(l) * nodes + j]);
            dp[j] = m;
        }
        best = std::max(best, std::pow(dp[blocks], 1.0 / q));
    }
    return best;
}

HlRhoValues hl_rho_values(const DyadicLift& a, const DyadicLift& b, const MetricParams& params) {
    HlRhoValues v;
    v.d1 = rho(a, b, 1, params);
    v.d2 = rho(a, b, 2, params);
    v.d3 = rho(a, b, 3, params);
    v.a1 = rho(a, 1, params);
    v.b1 = rho(b, 1, params);
    v.a2 = rho(a, 2, params);
    v.b2 = rho(b, 2, params);
    return v;
}

double hl_bound(const HlRhoValues& v, const MetricParams& params) {
    params.validate();
    const double s1 = v.a1 + v.b1;
    const double s2 = v.a2 + v.b2;
    double m = v.d1;
    m = std::max(m, v.d2);
    m = std::max(m, v.d1 * s1);
    m = std::max(m, v.d3);
    m = std::max(m, v.d2 * s1);
    m = std::max(m, v.d1 * (s2 + s1 * s1));
    return params.hl_constant * m;
}

}  // namespace rough
