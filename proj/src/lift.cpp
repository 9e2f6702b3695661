#include "rough/lift.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>

#include "rough/errors.hpp"

namespace rough {

PiecewisePath interpolate(const GridSample& sample, int m) {
    if (m < 0 || m > sample.level)
        throw ConfigError("interpolate: m must lie in [0, sample.level]");
    PiecewisePath path;
    path.level = m;
    const int stride = 1 << (sample.level - m);
    path.vertices.resize((1 << m) + 1, sample.dim);
    for (int k = 0; k <= (1 << m); ++k)
        path.vertices.row(k) = sample.values.row(k * stride);
    return path;
}

PiecewisePath refine_vertices(const PiecewisePath& path, int level) {
    if (level < path.level) throw ConfigError("refine_vertices: level below path level");
    PiecewisePath cur = path;
    while (cur.level < level) {
        PiecewisePath next;
        next.level = cur.level + 1;
        const int n = cur.segments();
        next.vertices.resize(2 * n + 1, cur.dim());
        for (int k = 0; k <= n; ++k) next.vertices.row(2 * k) = cur.vertices.row(k);
        for (int k = 0; k < n; ++k)
            next.vertices.row(2 * k + 1) =
                0.5 * (cur.vertices.row(k) + cur.vertices.row(k + 1));
        cur = std::move(next);
    }
    return cur;
}

const TruncatedTensor& DyadicLift::node(int n, int k) const {
    if (n < 0 || n > n_max_) throw ConfigError("lift node: n out of range");
    if (k < 1 || k > (1 << n)) throw ConfigError("lift node: k out of range");
    return levels_[n][k - 1];
}

DyadicLift DyadicLift::trivial(int dim, int n_max) {
    if (n_max < 0) throw ConfigError("trivial lift: n_max must be >= 0");
    DyadicLift lift;
    lift.m_ = 0;
    lift.n_max_ = n_max;
    lift.dim_ = dim;
    lift.levels_.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        lift.levels_[n].assign(std::size_t{1} << n, TruncatedTensor::identity(dim));
    return lift;
}

DyadicLift lift_path(const PiecewisePath& path, int n_max, std::size_t budget) {
    const int m = path.level;
    const int d = path.dim();
    if (n_max < 0) throw ConfigError("lift: n_max must be >= 0");
    const std::size_t cost = static_cast<std::size_t>(d) * d * d << n_max;
    if (cost > budget)
        throw ConfigError("lift: dim^3 * 2^n_max = " + std::to_string(cost) +
                          " exceeds budget " + std::to_string(budget));

    const int base = std::max(m, n_max);
    const int split = base - m;  // each segment splits into 2^split equal parts

    // Finest row: every part of a straight segment carries the signature of
    // the scaled increment. Parts of one segment share a single tensor value.
    std::vector<TruncatedTensor> row(std::size_t{1} << base);
    for (int s = 0; s < path.segments(); ++s) {
        const Eigen::VectorXd delta =
            (path.vertices.row(s + 1) - path.vertices.row(s)).transpose();
        const TruncatedTensor part = segment_signature(std::ldexp(1.0, -split) * delta);
        for (int j = 0; j < (1 << split); ++j)
            row[(static_cast<std::size_t>(s) << split) + j] = part;
    }

    DyadicLift lift;
    lift.m_ = m;
    lift.n_max_ = n_max;
    lift.dim_ = d;
    lift.levels_.resize(n_max + 1);
    if (base <= n_max) lift.levels_[base] = row;

    for (int n = base - 1; n >= 0; --n) {
        std::vector<TruncatedTensor> parent(std::size_t{1} << n);
        for (std::size_t k = 0; k < parent.size(); ++k)
            parent[k] = chen_mul(row[2 * k], row[2 * k + 1]);
        if (n < m) {
            // Below the segment scale the increment telescopes through shared
            // vertices; store it directly so it is exact.
            const int stride = 1 << (m - n);
            for (std::size_t k = 0; k < parent.size(); ++k)
                parent[k].level1() = (path.vertices.row((k + 1) * stride) -
                                      path.vertices.row(k * stride))
                                         .transpose();
        }
        row = std::move(parent);
        if (n <= n_max) lift.levels_[n] = row;
    }
    return lift;
}

DyadicLift lift_dyadic(const GridSample& sample, int m, int n_max, std::size_t budget) {
    if (m < 0 || m > sample.level)
        throw ConfigError("lift_dyadic: m must lie in [0, sample.level]");
    if (n_max > sample.level + 4)
        throw ConfigError("lift_dyadic: n_max must be <= sample.level + 4");
    return lift_path(interpolate(sample, m), n_max, budget);
}

const TruncatedTensor& interval_signature(const DyadicLift& lift, int n, int k) {
    return lift.node(n, k);
}

namespace {

std::vector<double> node_data(const TruncatedTensor& a) {
    const int d = a.dim();
    std::vector<double> data;
    data.reserve(d + d * d + d * d * d);
    for (int i = 0; i < d; ++i) data.push_back(a.level1()[i]);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) data.push_back(a.level2()(i, j));
    for (int i = 0; i < d * d * d; ++i) data.push_back(a.level3()[i]);
    return data;
}

TruncatedTensor node_from_data(int d, const double* data) {
    TruncatedTensor a(d);
    int pos = 0;
    for (int i = 0; i < d; ++i) a.level1()[i] = data[pos++];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a.level2()(i, j) = data[pos++];
    for (int i = 0; i < d * d * d; ++i) a.level3()[i] = data[pos++];
    return a;
}

}  // namespace

void write_lift_json(const DyadicLift& lift, const std::string& path) {
    nlohmann::json levels = nlohmann::json::array();
    for (int n = 0; n <= lift.n_max(); ++n) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 1; k <= (1 << n); ++k) row.push_back(node_data(lift.node(n, k)));
        levels.push_back(std::move(row));
    }
    nlohmann::json j{{"m", lift.m()}, {"n_max", lift.n_max()}, {"dim", lift.dim()},
                     {"levels", std::move(levels)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << j.dump();
}

DyadicLift read_lift_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    DyadicLift lift;
    lift.m_ = j.at("m").get<int>();
    lift.n_max_ = j.at("n_max").get<int>();
    lift.dim_ = j.at("dim").get<int>();
    const auto& levels = j.at("levels");
    if (static_cast<int>(levels.size()) != lift.n_max_ + 1)
        throw ConfigError("lift JSON: level count mismatch");
    lift.levels_.resize(lift.n_max_ + 1);
    const int d = lift.dim_;
    for (int n = 0; n <= lift.n_max_; ++n) {
        const auto& row = levels[n];
        if (static_cast<int>(row.size()) != (1 << n))
            throw ConfigError("lift JSON: node count mismatch at level " + std::to_string(n));
        lift.levels_[n].reserve(row.size());
        for (const auto& entry : row) {
            const auto data = entry.get<std::vector<double>>();
            if (static_cast<int>(data.size()) != d + d * d + d * d * d)
                throw ConfigError("lift JSON: node data length mismatch");
            lift.levels_[n].push_back(node_from_data(d, data.data()));
        }
    }
    return lift;
}

void write_lift_binary(const DyadicLift& lift, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const std::uint32_t header[4] = {static_cast<std::uint32_t>(lift.m()),
                                     static_cast<std::uint32_t>(lift.n_max()),
                                     static_cast<std::uint32_t>(lift.dim()), 0};
    out.write(reinterpret_cast<const char*>(header), 16);
    for (int n = 0; n <= lift.n_max(); ++n)
        for (int k = 1; k <= (1 << n); ++k) {
            const auto data = node_data(lift.node(n, k));
            out.write(reinterpret_cast<const char*>(data.data()),
                      static_cast<std::streamsize>(data.size() * 8));
        }
}

DyadicLift read_lift_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::uint32_t header[4];
    in.read(reinterpret_cast<char*>(header), 16);
    if (!in) throw ConfigError("lift binary header truncated: " + path);
    DyadicLift lift;
    lift.m_ = static_cast<int>(header[0]);
    lift.n_max_ = static_cast<int>(header[1]);
    lift.dim_ = static_cast<int>(header[2]);
    const int d = lift.dim_;
    const std::size_t per_node = static_cast<std::size_t>(d) + d * d + d * d * d;
    std::vector<double> data(per_node);
    lift.levels_.resize(lift.n_max_ + 1);
    for (int n = 0; n <= lift.n_max_; ++n) {
        lift.levels_[n].reserve(std::size_t{1} << n);
        for (int k = 0; k < (1 << n); ++k) {
            in.read(reinterpret_cast<char*>(data.data()),
                    static_cast<std::streamsize>(per_node * 8));
            if (!in) throw ConfigError("lift binary data truncated: " + path);
            lift.levels_[n].push_back(node_from_data(d, data.data()));
        }
    }
    return lift;
}

}  // namespace rough
