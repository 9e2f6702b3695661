#pragma once

// Experiment runners. Each takes a validated configuration and a thread
// count and returns a finished record table; output bytes never depend on
// the thread count because every Monte Carlo task writes to its own slot
// and reduction follows task order.

#include <string>

#include "rough/config.hpp"
#include "rough/records.hpp"

namespace rough {

// Per-seed p-variation distances between consecutive dyadic interpolations,
// with per-m medians and successive-ratio medians as the headline rows.
CsvTable run_converge(const ExperimentConfig& cfg, int threads);

// Monte Carlo second moments of interpolation differences and single
// interpolations across (tensor level, m, dyadic level n), with log2 slope
// fits in each direction.
CsvTable run_l2rates(const ExperimentConfig& cfg, int threads);

// One-dimensional capacity sandwich: eps^2 log of the explicit upper bound
// and of the probability lower bound, with extrapolated limits against
// -b^2/(2q).
CsvTable run_ldp1d(const ExperimentConfig& cfg, int threads);

// Tail rates: analytic dyadic/threshold slopes of the capacity bound (kind
// "tailrates" only) and the Monte Carlo exceedance trend (both kinds; kind
// "expgood" runs just this part).
CsvTable run_tailrates(const ExperimentConfig& cfg, int threads);

// Wong-Zakai-style convergence of ODE solutions along dyadic drivers.
CsvTable run_rde_wz(const ExperimentConfig& cfg, int threads);

// Dispatch on cfg.kind.
CsvTable run_experiment(const ExperimentConfig& cfg, int threads);

// "results.csv" -> "results.json"; other extensions get ".json" appended.
std::string json_mirror_path(const std::string& csv_path);

}  // namespace rough
