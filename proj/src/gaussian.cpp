#include "rough/gaussian.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "rough/errors.hpp"
#include "rough/parallel.hpp"
#include "rough/rng.hpp"

namespace rough {

void CovarianceModel::validate() const {
    if (!(hurst > 0.25) || !(hurst <= 1.0))
        throw ConfigError("hurst must lie in (0.25, 1]: the degree-3 dyadic lift "
                          "does not exist for h <= 1/4");
    if (!(scale > 0.0)) throw ConfigError("scale must be positive");
}

double covariance(const CovarianceModel& model, double s, double t) {
    if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0))
        throw ConfigError("covariance: times must lie in [0, 1]");
    const double h2 = 2.0 * model.hurst;
    return 0.5 * model.scale *
           (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

namespace {

constexpr int kMaxLevel = 14;

using CholKey = std::tuple<double, double, int, int>;  // hurst, scale, kind, level

// Lower-triangular factor of the increment covariance at one grid level.
// Write-once, read-many: entries are never replaced once inserted.
std::map<CholKey, std::shared_ptr<const Eigen::MatrixXd>> g_chol_cache;
std::mutex g_chol_mutex;

Eigen::MatrixXd increment_covariance(const CovarianceModel& model, int level) {
    const int n = 1 << level;
    Eigen::MatrixXd cov(n, n);
    for (int j = 0; j < n; ++j) {
        const double tj0 = static_cast<double>(j) / n;
        const double tj1 = static_cast<double>(j + 1) / n;
        for (int k = j; k < n; ++k) {
            const double tk0 = static_cast<double>(k) / n;
            const double tk1 = static_cast<double>(k + 1) / n;
            const double c = covariance(model, tj1, tk1) - covariance(model, tj1, tk0) -
                             covariance(model, tj0, tk1) + covariance(model, tj0, tk0);
            cov(j, k) = c;
            cov(k, j) = c;
        }
    }
    return cov;
}

std::shared_ptr<const Eigen::MatrixXd> cholesky_factor(const CovarianceModel& model, int level) {
    const CholKey key{model.hurst, model.scale, static_cast<int>(model.kind), level};
    {
        std::lock_guard<std::mutex> lock(g_chol_mutex);
        auto it = g_chol_cache.find(key);
        if (it != g_chol_cache.end()) return it->second;
    }

    Eigen::MatrixXd cov = increment_covariance(model, level);
    const int n = static_cast<int>(cov.rows());
    const double base_ridge = 1e-14 * cov.trace() / n;

    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    double ridge = base_ridge;
    int escalations = 0;
    while (llt.info() != Eigen::Success) {
        if (escalations > 3)
            throw NumericError("increment covariance is not positive definite even with ridge " +
                               std::to_string(ridge / 10.0));
        llt.compute(cov + ridge * Eigen::MatrixXd::Identity(n, n));
        ridge *= 10.0;
        ++escalations;
    }

    auto factor = std::make_shared<const Eigen::MatrixXd>(llt.matrixL());
    std::lock_guard<std::mutex> lock(g_chol_mutex);
    auto [it, inserted] = g_chol_cache.emplace(key, factor);
    return it->second;
}

void fill_sample(const Eigen::MatrixXd& factor, GridSample& s, int level, int dim,
                 std::uint64_t seed, std::uint64_t index) {
    const int n = 1 << level;
    s.level = level;
    s.dim = dim;
    s.seed = seed;
    s.index = index;
    s.values = Eigen::MatrixXd::Zero(n + 1, dim);
    Eigen::VectorXd z(n);
    for (int c = 0; c < dim; ++c) {
        RandomStream rng(seed, index, static_cast<std::uint64_t>(c));
        for (int k = 0; k < n; ++k) z[k] = rng.normal();
        Eigen::VectorXd inc = factor * z;
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            acc += inc[k];
            s.values(k + 1, c) = acc;
        }
    }
}

void check_sample_args(const CovarianceModel& model, int level, int dim) {
    model.validate();
    if (level < 1 || level > kMaxLevel)
        throw ConfigError("sample level must lie in [1, " + std::to_string(kMaxLevel) + "]");
    if (dim < 1) throw ConfigError("dim must be >= 1");
}

}  // namespace

std::vector<GridSample> sample_paths(const CovarianceModel& model, int level, int dim,
                                     int count, std::uint64_t seed, int threads) {
    check_sample_args(model, level, dim);
    if (count < 0) throw ConfigError("count must be >= 0");

    const auto factor = cholesky_factor(model, level);
    std::vector<GridSample> out(count);
    parallel_for_tasks(threads, static_cast<std::size_t>(count), [&](std::size_t i) {
        fill_sample(*factor, out[i], level, dim, seed, i);
    });
    return out;
}

GridSample sample_one(const CovarianceModel& model, int level, int dim,
                      std::uint64_t seed, std::uint64_t index) {
    check_sample_args(model, level, dim);
    const auto factor = cholesky_factor(model, level);
    GridSample s;
    fill_sample(*factor, s, level, dim, seed, index);
    return s;
}

double long_memory_first_ratio(const CovarianceModel& model, double s, double t) {
    const double var = covariance(model, t, t) - 2.0 * covariance(model, s, t) +
                       covariance(model, s, s);
    return var / std::pow(std::abs(t - s), 2.0 * model.hurst);
}

double long_memory_second_ratio(const CovarianceModel& model, double s, double t, double tau) {
    const double cross = covariance(model, t, t + tau) - covariance(model, t, s + tau) -
                         covariance(model, s, t + tau) + covariance(model, s, s + tau);
    const double r = (t - s) / tau;
    return std::abs(cross) / (std::pow(tau, 2.0 * model.hurst) * r * r);
}

LongMemoryReport verify_long_memory(const CovarianceModel& model, int level, double tolerance) {
    model.validate();
    if (level < 1 || level > kMaxLevel) throw ConfigError("verify_long_memory: bad level");
    const int n = 1 << level;
    LongMemoryReport rep;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            const double s = static_cast<double>(a) / n;
            const double t = static_cast<double>(b) / n;
            const double r1 = long_memory_first_ratio(model, s, t);
            if (r1 > rep.c_first) {
                rep.c_first = r1;
                rep.s_first = s;
                rep.t_first = t;
            }
            // tau >= t - s keeps (t - s)/tau <= 1; t + tau <= 1 bounds the shift.
            for (int c = b - a; b + c <= n; ++c) {
                const double tau = static_cast<double>(c) / n;
                const double denom = std::pow(tau, 2.0 * model.hurst) *
                                     ((t - s) / tau) * ((t - s) / tau);
                if (!(denom > tolerance)) continue;
                const double r2 = long_memory_second_ratio(model, s, t, tau);
                if (r2 > rep.c_second) {
                    rep.c_second = r2;
                    rep.s_second = s;
                    rep.t_second = t;
                    rep.tau_second = tau;
                }
            }
        }
    }
    rep.c = std::max(rep.c_first, rep.c_second);
    return rep;
}

void write_sample_csv(const GridSample& sample, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "t";
    for (int c = 1; c <= sample.dim; ++c) out << ",c" << c;
    out << "\r\n";
    char buf[32];
    for (int k = 0; k < sample.points(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", sample.t(k));
        out << buf;
        for (int c = 0; c < sample.dim; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", sample.values(k, c));
            out << ',' << buf;
        }
        out << "\r\n";
    }
}

void write_sample_batch(const std::vector<GridSample>& batch, const std::string& path) {
    if (batch.empty()) throw ConfigError("write_sample_batch: empty batch");
    const int level = batch[0].level;
    const int dim = batch[0].dim;
    for (const auto& s : batch)
        if (s.level != level || s.dim != dim)
            throw ConfigError("write_sample_batch: mixed levels or dims");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const std::uint16_t u_level = static_cast<std::uint16_t>(level);
    const std::uint16_t u_dim = static_cast<std::uint16_t>(dim);
    const std::uint32_t u_count = static_cast<std::uint32_t>(batch.size());
    const std::uint64_t u_seed = batch[0].seed;
    out.write(reinterpret_cast<const char*>(&u_level), 2);
    out.write(reinterpret_cast<const char*>(&u_dim), 2);
    out.write(reinterpret_cast<const char*>(&u_count), 4);
    out.write(reinterpret_cast<const char*>(&u_seed), 8);
    for (const auto& s : batch)
        for (int k = 0; k < s.points(); ++k)
            for (int c = 0; c < dim; ++c) {
                const double v = s.values(k, c);
                out.write(reinterpret_cast<const char*>(&v), 8);
            }
}

std::vector<GridSample> read_sample_batch(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::uint16_t u_level = 0, u_dim = 0;
    std::uint32_t u_count = 0;
    std::uint64_t u_seed = 0;
    in.read(reinterpret_cast<char*>(&u_level), 2);
    in.read(reinterpret_cast<char*>(&u_dim), 2);
    in.read(reinterpret_cast<char*>(&u_count), 4);
    in.read(reinterpret_cast<char*>(&u_seed), 8);
    if (!in) throw ConfigError("sample batch header truncated: " + path);
    std::vector<GridSample> batch(u_count);
    const int points = (1 << u_level) + 1;
    for (std::uint32_t i = 0; i < u_count; ++i) {
        GridSample& s = batch[i];
        s.level = u_level;
        s.dim = u_dim;
        s.seed = u_seed;
        s.index = i;
        s.values.resize(points, u_dim);
        for (int k = 0; k < points; ++k)
            for (int c = 0; c < u_dim; ++c) {
                double v;
                in.read(reinterpret_cast<char*>(&v), 8);
                s.values(k, c) = v;
            }
    }
    if (!in) throw ConfigError("sample batch data truncated: " + path);
    return batch;
}

}  // namespace rough
