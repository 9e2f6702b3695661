#pragma once

// Truncated tensor algebra over R^d up to degree 3, the state space for
// third-level path signatures. Level 0 is the constant 1 and stays implicit;
// levels 1..3 are stored dense. The group product follows Chen's relation,
// so tensors over adjacent intervals compose by chen_mul.

#include <Eigen/Dense>

#include <string>

namespace rough {

class TruncatedTensor {
public:
    TruncatedTensor() = default;
    explicit TruncatedTensor(int dim);

    // Group identity: all stored levels zero (level 0 is 1 implicitly).
    static TruncatedTensor identity(int dim) { return TruncatedTensor(dim); }

    int dim() const { return dim_; }

    Eigen::VectorXd& level1() { return lvl1_; }
    const Eigen::VectorXd& level1() const { return lvl1_; }
    Eigen::MatrixXd& level2() { return lvl2_; }
    const Eigen::MatrixXd& level2() const { return lvl2_; }

    // Level 3 is a flat array of d^3 entries indexed (i*d + j)*d + k.
    Eigen::VectorXd& level3() { return lvl3_; }
    const Eigen::VectorXd& level3() const { return lvl3_; }
    double l3(int i, int j, int k) const { return lvl3_[(i * dim_ + j) * dim_ + k]; }
    double& l3(int i, int j, int k) { return lvl3_[(i * dim_ + j) * dim_ + k]; }

    void set_zero();

    // Frobenius norm of one level (level in {1,2,3}).
    double level_norm(int level) const;

    // Largest absolute entry difference across all levels.
    static double max_abs_diff(const TruncatedTensor& a, const TruncatedTensor& b);

private:
    int dim_ = 0;
    Eigen::VectorXd lvl1_;
    Eigen::MatrixXd lvl2_;
    Eigen::VectorXd lvl3_;
};

// c = a x b truncated at degree 3:
//   c1 = a1 + b1
//   c2 = a2 + b2 + a1 (x) b1
//   c3 = a3 + b3 + a1 (x) b2 + a2 (x) b1
TruncatedTensor chen_mul(const TruncatedTensor& a, const TruncatedTensor& b);
void chen_mul_into(const TruncatedTensor& a, const TruncatedTensor& b, TruncatedTensor& out);

// Signature of a straight segment with increment delta:
// (delta, delta^(x)2 / 2, delta^(x)3 / 6).
TruncatedTensor segment_signature(const Eigen::VectorXd& delta);

// Dilation delta_eps: level i is scaled by eps^i. Group homomorphism.
TruncatedTensor dilate(const TruncatedTensor& a, double eps);

// JSON form {"dim": d, "data": [...]} with data = level1, level2 row-major,
// level3 flat, in that order.
std::string tensor_to_json(const TruncatedTensor& a);
TruncatedTensor tensor_from_json(const std::string& text);

}  // namespace rough
