#pragma once

// Piecewise-linear dyadic interpolation of a grid sample and its degree-3
// lift over the full dyadic interval tree.
//
// The lift stores one truncated tensor per dyadic interval [t_n^{k-1}, t_n^k]
// for every n <= n_max. Construction starts from closed-form segment
// signatures at the finest addressed level (straight segments split exactly,
// no quadrature) and folds upward pairwise with chen_mul. Level 1 of a node
// is kept as the exact path increment: below the segment scale it is the
// difference of the two shared sample vertices, so two interpolations of the
// same sample agree bitwise there.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rough/gaussian.hpp"
#include "rough/tensor.hpp"

namespace rough {

// Vertices of a piecewise-linear path with spacing 2^{-level} on [0, 1].
struct PiecewisePath {
    int level = 0;
    Eigen::MatrixXd vertices;  // (2^level + 1) x dim

    int dim() const { return static_cast<int>(vertices.cols()); }
    int segments() const { return 1 << level; }
};

// w^(m): the dyadic interpolation of a sample at level m <= sample.level.
// Vertices are read directly from the sample, so shared dyadic points match
// the sample values exactly.
PiecewisePath interpolate(const GridSample& sample, int m);

// Vertices of the same path on a finer dyadic grid. Midpoints are averages of
// their parents; original vertices are copied unchanged.
PiecewisePath refine_vertices(const PiecewisePath& path, int level);

class DyadicLift {
public:
    int m() const { return m_; }
    int n_max() const { return n_max_; }
    int dim() const { return dim_; }

    // Tensor over [t_n^{k-1}, t_n^k], k in 1..2^n.
    const TruncatedTensor& node(int n, int k) const;

    // Lift whose every node is the group identity (the lift of a constant path).
    static DyadicLift trivial(int dim, int n_max);

private:
    friend DyadicLift lift_path(const PiecewisePath&, int, std::size_t);
    friend DyadicLift read_lift_json(const std::string&);
    friend DyadicLift read_lift_binary(const std::string&);
    int m_ = 0, n_max_ = 0, dim_ = 0;
    std::vector<std::vector<TruncatedTensor>> levels_;  // levels_[n][k-1]
};

inline constexpr std::size_t kDefaultLiftBudget = std::size_t{1} << 24;

// Lift of w^(m) addressed down to dyadic level n_max (n_max >= m or < m both
// work; the tree is built from level max(m, n_max)). Fails if
// dim^3 * 2^n_max exceeds the budget.
DyadicLift lift_dyadic(const GridSample& sample, int m, int n_max,
                       std::size_t budget = kDefaultLiftBudget);
DyadicLift lift_path(const PiecewisePath& path, int n_max,
                     std::size_t budget = kDefaultLiftBudget);

// Signature over [t_n^{k-1}, t_n^k]; the stored tree node.
const TruncatedTensor& interval_signature(const DyadicLift& lift, int n, int k);

// Tree dumps. JSON: {"m", "n_max", "dim", "levels": [[node data ...] ...]}
// with per-node data laid out as in tensor_to_json. Binary: 16-byte header
// {m:u32, n_max:u32, dim:u32, reserved:u32}, then nodes level by level.
void write_lift_json(const DyadicLift& lift, const std::string& path);
DyadicLift read_lift_json(const std::string& path);
void write_lift_binary(const DyadicLift& lift, const std::string& path);
DyadicLift read_lift_binary(const std::string& path);

}  // namespace rough
