#pragma once

// Controlled ODEs along piecewise-linear drivers. The driving fields are
// polynomial (degree at most 3) with analytic Jacobians; each straight
// segment of the driver is integrated with classical fourth-order steps, so
// a solve is deterministic for a given driver, field set, and substep count.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "rough/gaussian.hpp"
#include "rough/lift.hpp"

namespace rough {

// One monomial coeff * x_1^{e_1} ... x_N^{e_N} of a field component.
struct PolyTerm {
    double coeff = 0.0;
    std::vector<int> exponents;
};

// d driving fields V_1..V_d on R^N, each component a polynomial of total
// degree at most 3. Indices are zero-based in this API.
class VectorFieldSet {
public:
    VectorFieldSet(int state_dim, int drive_dim);

    int state_dim() const { return state_dim_; }
    int drive_dim() const { return drive_dim_; }

    // Adds one monomial to component `comp` of field `alpha`. The exponent
    // vector must have state_dim entries; total degree above 3 is rejected.
    void add_term(int alpha, int comp, double coeff, std::vector<int> exponents);

    const std::vector<PolyTerm>& terms(int alpha, int comp) const;

    // Columns are V_1(x) .. V_d(x).
    Eigen::MatrixXd eval(const Eigen::VectorXd& x) const;

    // Jacobian of V_alpha at x, entry (r, c) = d(V_alpha)_r / dx_c.
    Eigen::MatrixXd jacobian(int alpha, const Eigen::VectorXd& x) const;

private:
    int state_dim_ = 0, drive_dim_ = 0;
    std::vector<std::vector<std::vector<PolyTerm>>> terms_;  // [alpha][comp]
};

// Parses "1.5*x1^2*x2 - x3 + 0.25" into monomials over x_1..x_{state_dim}.
// Terms are products of numeric literals and powers x<i> or x<i>^<k>,
// joined by '+' or '-'.
std::vector<PolyTerm> parse_polynomial(const std::string& text, int state_dim);

// Solves dx = sum_alpha V_alpha(x) dw^alpha along the polyline, taking
// `substeps` fourth-order steps per straight segment. Row k of the result is
// the state at driver vertex k; row 0 is x0. Non-finite states abort with
// the segment time of the blow-up.
Eigen::MatrixXd solve_polyline(const Eigen::VectorXd& x0, const VectorFieldSet& fields,
                               const PiecewisePath& driver, int substeps);

// Same along the dyadic interpolation w^(m) of a sample.
Eigen::MatrixXd solve_along(const Eigen::VectorXd& x0, const VectorFieldSet& fields,
                            const GridSample& sample, int m, int substeps);

struct WzRow {
    int m = 0;
    double sup_distance = 0.0;  // sup over level-m vertices of |x^(m+1) - x^(m)|
};

// Distances between solutions along consecutive dyadic interpolations,
// one row per m in [m_lo, m_hi]. Requires m_hi + 1 <= sample.level.
std::vector<WzRow> wz_convergence(const Eigen::VectorXd& x0, const VectorFieldSet& fields,
                                  const GridSample& sample, int m_lo, int m_hi,
                                  int substeps);

// One driver pair for the continuity probe, with the p-variation distance of
// the drivers supplied by the caller (dp_exact on their lifts).
struct ProbePair {
    PiecewisePath a;
    PiecewisePath b;
    double driver_dp = 0.0;
};

struct ProbePoint {
    double driver_dp = 0.0;
    double solution_dist = 0.0;
};

struct ProbeReport {
    std::vector<ProbePoint> scatter;          // one point per input pair
    double max_modulus = 0.0;                 // largest solution distance seen
    std::vector<double> envelope_dp;          // right edge of each quantile bin
    std::vector<double> envelope_dist;        // max solution distance per bin
    bool envelope_ok = false;                 // first-bin envelope well below last-bin
};

// Solves along both drivers of every pair and relates solution sup-distance
// (at shared dyadic vertices) to driver d_p. The envelope splits the pairs
// into up to four quantile bins by driver distance; envelope_ok records
// whether the smallest-distance bin's envelope is at most half the largest
// bin's, the qualitative continuity statement the scatter is meant to show.
ProbeReport continuity_probe(const Eigen::VectorXd& x0, const VectorFieldSet& fields,
                             const std::vector<ProbePair>& pairs, int substeps);

// CSV {t, x_1..x_N} of a solution returned by solve_polyline/solve_along.
void write_solution_csv(const PiecewisePath& driver, const Eigen::MatrixXd& solution,
                        const std::string& path);

}  // namespace rough
