#pragma once

// Fractional Brownian motion on dyadic grids: exact covariance, Cholesky
// sampling of increments, and the empirical long-memory constant.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace rough {

enum class CovKind { fbm };

struct CovarianceModel {
    double hurst = 0.5;
    CovKind kind = CovKind::fbm;
    double scale = 1.0;

    // hurst must lie in (1/4, 1]. Below 1/4 the degree-3 dyadic lift of the
    // process diverges, so such models are rejected outright.
    void validate() const;
};

// Per-component covariance R(s, t) = scale/2 * (s^2h + t^2h - |t-s|^2h).
double covariance(const CovarianceModel& model, double s, double t);

// One path on the grid t_k = k / 2^level, values (2^level + 1) x dim,
// row 0 identically zero. Components are independent.
struct GridSample {
    int level = 0;
    int dim = 0;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;  // position within its batch
    Eigen::MatrixXd values;

    double t(int k) const { return static_cast<double>(k) / static_cast<double>(1 << level); }
    int points() const { return (1 << level) + 1; }
};

// Draws `count` independent paths. Increments over the grid carry exactly the
// Gaussian law induced by R via a Cholesky factor of the increment covariance;
// the factor is cached per (model, level). Sample i uses the substream
// (seed, i, component), so the batch is reproducible for any thread count.
// level must be in [1, 14].
std::vector<GridSample> sample_paths(const CovarianceModel& model, int level, int dim,
                                     int count, std::uint64_t seed, int threads = 1);

// Draws the single path that sample_paths(model, level, dim, count, seed)
// would place at position `index`, without materializing the batch. Useful
// for Monte Carlo loops that visit each path once.
GridSample sample_one(const CovarianceModel& model, int level, int dim,
                      std::uint64_t seed, std::uint64_t index);

struct LongMemoryReport {
    double c = 0.0;        // smallest constant making both inequalities hold
    double c_first = 0.0;  // sup of E|B_t - B_s|^2 / |t-s|^2h
    double c_second = 0.0; // sup of |E dB dB'| / (tau^2h ((t-s)/tau)^2)
    double s_first = 0.0, t_first = 0.0;
    double s_second = 0.0, t_second = 0.0, tau_second = 0.0;
};

// Evaluates both defining ratios of the long-memory property on all grid
// triples (s, t, tau) with s < t, t + tau <= 1 and (t - s)/tau <= 1.
// Denominators below `tolerance` are skipped. Constants are per component.
LongMemoryReport verify_long_memory(const CovarianceModel& model, int level,
                                    double tolerance = 1e-300);

double long_memory_first_ratio(const CovarianceModel& model, double s, double t);
double long_memory_second_ratio(const CovarianceModel& model, double s, double t, double tau);

// Columnar CSV: header t,c1,...,cd then one row per grid point.
void write_sample_csv(const GridSample& sample, const std::string& path);

// Binary batch: 16-byte header {level:u16, dim:u16, count:u32, seed:u64},
// then count * (2^level + 1) * dim doubles, native little-endian layout.
void write_sample_batch(const std::vector<GridSample>& batch, const std::string& path);
std::vector<GridSample> read_sample_batch(const std::string& path);

}  // namespace rough
