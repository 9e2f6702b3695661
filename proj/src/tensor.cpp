#include "rough/tensor.hpp"

#include "json.hpp"

#include <cmath>

#include "rough/errors.hpp"

namespace rough {

TruncatedTensor::TruncatedTensor(int dim) : dim_(dim) {
    if (dim < 1) throw ConfigError("tensor dimension must be >= 1");
    lvl1_ = Eigen::VectorXd::Zero(dim);
    lvl2_ = Eigen::MatrixXd::Zero(dim, dim);
    lvl3_ = Eigen::VectorXd::Zero(dim * dim * dim);
}

void TruncatedTensor::set_zero() {
    lvl1_.setZero();
    lvl2_.setZero();
    lvl3_.setZero();
}

double TruncatedTensor::level_norm(int level) const {
    switch (level) {
        case 1: return lvl1_.norm();
        case 2: return lvl2_.norm();
        case 3: return lvl3_.norm();
        default: throw ConfigError("level must be 1, 2 or 3");
    }
}

double TruncatedTensor::max_abs_diff(const TruncatedTensor& a, const TruncatedTensor& b) {
    double m = (a.lvl1_ - b.lvl1_).cwiseAbs().maxCoeff();
    m = std::max(m, (a.lvl2_ - b.lvl2_).cwiseAbs().maxCoeff());
    m = std::max(m, (a.lvl3_ - b.lvl3_).cwiseAbs().maxCoeff());
    return m;
}

void chen_mul_into(const TruncatedTensor& a, const TruncatedTensor& b, TruncatedTensor& out) {
    const int d = a.dim();
    if (b.dim() != d) throw ConfigError("chen_mul: dimension mismatch");
    if (out.dim() != d) out = TruncatedTensor(d);

    const auto& a1 = a.level1();
    const auto& b1 = b.level1();
    const auto& a2 = a.level2();
    const auto& b2 = b.level2();

    // Level 3 first so that aliasing with a or b is safe before the lower
    // levels of out are overwritten.
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double a1i = a1[i];
            const double a2ij = a2(i, j);
            for (int k = 0; k < d; ++k)
                out.l3(i, j, k) = a.l3(i, j, k) + b.l3(i, j, k) + a1i * b2(j, k) + a2ij * b1[k];
        }
    out.level2() = a2 + b2 + a1 * b1.transpose();
    out.level1() = a1 + b1;
}

TruncatedTensor chen_mul(const TruncatedTensor& a, const TruncatedTensor& b) {
    TruncatedTensor out(a.dim());
    chen_mul_into(a, b, out);
    return out;
}

TruncatedTensor segment_signature(const Eigen::VectorXd& delta) {
    const int d = static_cast<int>(delta.size());
    TruncatedTensor s(d);
    s.level1() = delta;
    s.level2() = 0.5 * (delta * delta.transpose());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double dij = delta[i] * delta[j];
            for (int k = 0; k < d; ++k)
                s.l3(i, j, k) = dij * delta[k] / 6.0;
        }
    return s;
}

TruncatedTensor dilate(const TruncatedTensor& a, double eps) {
    TruncatedTensor out(a.dim());
    out.level1() = eps * a.level1();
    out.level2() = (eps * eps) * a.level2();
    out.level3() = (eps * eps * eps) * a.level3();
    return out;
}

std::string tensor_to_json(const TruncatedTensor& a) {
    const int d = a.dim();
    std::vector<double> data;
    data.reserve(d + d * d + d * d * d);
    for (int i = 0; i < d; ++i) data.push_back(a.level1()[i]);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) data.push_back(a.level2()(i, j));
    for (int i = 0; i < d * d * d; ++i) data.push_back(a.level3()[i]);
    nlohmann::json j{{"dim", d}, {"data", data}};
    return j.dump();
}

TruncatedTensor tensor_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int d = j.at("dim").get<int>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<int>(data.size()) != d + d * d + d * d * d)
        throw ConfigError("tensor JSON: data length does not match dim");
    TruncatedTensor a(d);
    int pos = 0;
    for (int i = 0; i < d; ++i) a.level1()[i] = data[pos++];
    for (int i = 0; i < d; ++i)
        for (int j2 = 0; j2 < d; ++j2) a.level2()(i, j2) = data[pos++];
    for (int i = 0; i < d * d * d; ++i) a.level3()[i] = data[pos++];
    return a;
}

}  // namespace rough
