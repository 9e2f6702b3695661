#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "rough/errors.hpp"
#include "rough/gaussian.hpp"
#include "rough/records.hpp"
#include "rough/stats.hpp"

using rough::CovarianceModel;
using rough::GridSample;

namespace {

CovarianceModel fbm(double h, double scale = 1.0) {
    CovarianceModel m;
    m.hurst = h;
    m.scale = scale;
    return m;
}

}  // namespace

TEST_CASE("covariance reduces to min(s,t) in the Brownian case") {
    const CovarianceModel m = fbm(0.5);
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b) {
            const double s = a / 8.0, t = b / 8.0;
            CHECK(rough::covariance(m, s, t) ==
                  doctest::Approx(std::min(s, t)).epsilon(1e-14));
        }
}

TEST_CASE("covariance diagonal and scale") {
    const CovarianceModel m = fbm(0.35, 2.5);
    for (double t : {0.125, 0.5, 0.875, 1.0})
        CHECK(rough::covariance(m, t, t) ==
              doctest::Approx(2.5 * std::pow(t, 0.7)).epsilon(1e-14));
}

TEST_CASE("covariance off-diagonal value pinned at h = 0.4") {
    CHECK(rough::covariance(fbm(0.4), 0.25, 0.75) ==
          doctest::Approx(0.2749728404906576).epsilon(1e-15));
}

TEST_CASE("covariance rejects times outside the unit interval") {
    const CovarianceModel m = fbm(0.5);
    CHECK_THROWS_AS(rough::covariance(m, -0.1, 0.5), rough::ConfigError);
    CHECK_THROWS_AS(rough::covariance(m, 0.1, 1.5), rough::ConfigError);
}

TEST_CASE("model validation enforces the supported exponent range") {
    CHECK_THROWS_AS(fbm(0.25).validate(), rough::ConfigError);
    CHECK_THROWS_AS(fbm(0.1).validate(), rough::ConfigError);
    CHECK_THROWS_AS(fbm(1.01).validate(), rough::ConfigError);
    CHECK_THROWS_AS(fbm(0.5, 0.0).validate(), rough::ConfigError);
    CHECK_NOTHROW(fbm(1.0).validate());
    CHECK_NOTHROW(fbm(0.3).validate());
}

TEST_CASE("sampling is deterministic and slot-addressable") {
    const CovarianceModel m = fbm(0.4);
    const auto batch1 = rough::sample_paths(m, 4, 2, 5, 99);
    const auto batch2 = rough::sample_paths(m, 4, 2, 5, 99);
    const auto batch4t = rough::sample_paths(m, 4, 2, 5, 99, 4);
    REQUIRE(batch1.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK((batch1[i].values - batch2[i].values).cwiseAbs().maxCoeff() == 0.0);
        CHECK((batch1[i].values - batch4t[i].values).cwiseAbs().maxCoeff() == 0.0);
        const GridSample one = rough::sample_one(m, 4, 2, 99, i);
        CHECK((one.values - batch1[i].values).cwiseAbs().maxCoeff() == 0.0);
        CHECK(batch1[i].values.row(0).norm() == 0.0);
        CHECK(batch1[i].values.allFinite());
    }
    const auto other = rough::sample_paths(m, 4, 2, 1, 100);
    CHECK((other[0].values - batch1[0].values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("terminal variance matches the Brownian law") {
    const int n = 100000;
    std::vector<double> b1(n);
    for (int i = 0; i < n; ++i)
        b1[i] = rough::sample_one(fbm(0.5), 1, 1, 2024, i).values(2, 0);
    CHECK(std::abs(rough::mean(b1)) < 0.02);
    CHECK(rough::sample_variance(b1) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rough::ks_test_pvalue(b1, rough::normal_cdf) > 0.001);
}

TEST_CASE("increment second moments track the covariance model") {
    const double h = 0.4;
    const CovarianceModel m = fbm(h);
    const int n = 20000, level = 3;
    const std::pair<int, int> pairs[] = {{0, 8}, {2, 5}, {3, 4}, {1, 7}};
    std::vector<std::vector<double>> sq(4, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        const GridSample s = rough::sample_one(m, level, 1, 555, i);
        for (int p = 0; p < 4; ++p) {
            const double d = s.values(pairs[p].second, 0) - s.values(pairs[p].first, 0);
            sq[p][i] = d * d;
        }
    }
    for (int p = 0; p < 4; ++p) {
        const double dt = (pairs[p].second - pairs[p].first) / 8.0;
        const double target = std::pow(dt, 2.0 * h);
        const double est = rough::mean(sq[p]);
        const double se = std::sqrt(rough::sample_variance(sq[p]) / n);
        CHECK(std::abs(est - target) <= 3.0 * se);
    }
}

TEST_CASE("long-memory constants: Brownian case is exactly critical") {
    const auto rep = rough::verify_long_memory(fbm(0.5), 4);
    CHECK(rep.c_first == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.c_second <= 1e-12);
    CHECK(rep.c == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("long-memory constants at h = 0.3: values and grid stability") {
    const auto r6 = rough::verify_long_memory(fbm(0.3), 6);
    const auto r7 = rough::verify_long_memory(fbm(0.3), 7);
    CHECK(r6.c_first == doctest::Approx(1.0).epsilon(1e-12));
    // adjacent unit-gap increments maximize the cross ratio at (2 - 2^{2h})/2
    CHECK(r6.c_second == doctest::Approx(0.242141716744801).epsilon(1e-12));
    CHECK(std::abs(r6.c - r7.c) <= 1e-9);
}

TEST_CASE("cross-increment ratio helpers agree with direct covariance algebra") {
    const CovarianceModel m = fbm(0.3);
    CHECK(rough::long_memory_first_ratio(m, 0.25, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    // increments [1/4, 1/2] and [1/2, 3/4]: tau = 1/4, x = 1
    const double expect = (2.0 - std::pow(2.0, 0.6)) / 2.0;
    CHECK(rough::long_memory_second_ratio(m, 0.25, 0.5, 0.25) ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("binary batches and CSV exports round-trip") {
    namespace fs = std::filesystem;
    const CovarianceModel m = fbm(0.45);
    const auto batch = rough::sample_paths(m, 3, 2, 3, 77);
    const fs::path bin = fs::temp_directory_path() / "rough_test_batch.bin";
    const fs::path csv = fs::temp_directory_path() / "rough_test_sample.csv";

    rough::write_sample_batch(batch, bin.string());
    const auto back = rough::read_sample_batch(bin.string());
    REQUIRE(back.size() == batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        CHECK(back[i].level == batch[i].level);
        CHECK(back[i].dim == batch[i].dim);
        CHECK((back[i].values - batch[i].values).cwiseAbs().maxCoeff() == 0.0);
    }

    rough::write_sample_csv(batch[0], csv.string());
    const rough::CsvTable table = rough::read_csv(csv.string());
    CHECK(table.columns() == std::vector<std::string>{"t", "c1", "c2"});
    CHECK(table.row_count() == 9);
    CHECK(table.cell(0, "t") == "0");

    std::remove(bin.string().c_str());
    std::remove(csv.string().c_str());
}
