#pragma once

// Experiment configuration. The on-disk format is a flat key = value text
// with one [section] per module; '#' or ';' starts a full-line comment.
// Loading resolves derived values (theta = mid, n_tilde = auto), revalidates
// every model-side constraint by name, and rejects unknown sections, unknown
// keys, and keys that the selected experiment kind does not use.

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rough/capacity.hpp"
#include "rough/gaussian.hpp"
#include "rough/metrics.hpp"
#include "rough/rde.hpp"

namespace rough {

using IniSections = std::map<std::string, std::map<std::string, std::string>>;

IniSections parse_ini(const std::string& text);

// Declarative field block of the [rde] section; fields are kept as text and
// compiled on demand so the config stays a plain value type.
struct RdeSpec {
    int state_dim = 0;
    int drive_dim = 0;
    Eigen::VectorXd x0;
    std::vector<std::vector<std::string>> field_text;  // [alpha][component]
    int substeps = 16;

    VectorFieldSet build_fields() const;
};

struct ExperimentConfig {
    std::string kind;  // converge | l2rates | ldp1d | tailrates | expgood | rde-wz

    // [model]
    CovarianceModel model;
    int dim = 1;

    // [metric]
    MetricParams metric;

    // [capacity]
    int cap_level = 1;   // tensor level i
    int cap_degree = 2;  // polynomial degree N
    double cap_q = 3.0;
    double theta = 0.0;   // resolved ("mid" accepted in the file)
    int n_tilde = 0;      // resolved ("auto" accepted in the file)
    double cap_b = 1.0;
    double cap_lambda = 1.0;
    double cap_c1 = 1.0;
    double cap_c2 = 1.0;

    // [sweep]
    std::vector<int> m_list;        // main m sweep
    std::vector<int> m_emp;         // empirical m sweep (tail experiments)
    std::vector<int> n_list;        // dyadic levels for the second-moment sweep
    std::vector<double> eps_list;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    int lambda_points = 0;
    int level = 0;  // sampling grid level

    // [rde]
    RdeSpec rde;

    // [mc]
    std::vector<std::uint64_t> seeds;
    int samples = 0;

    // [output]
    std::string out_path;
    bool json_mirror = false;

    // FNV-1a over the sorted "section.key=value" lines, [output] excluded,
    // so rows identify the producing configuration but not its destination.
    std::uint64_t hash = 0;
    std::string hash_hex() const;

    // Tail bound parameter block at dyadic level m.
    TailParams tail_params(int m) const;

    // Log-spaced lambda sweep [lambda_lo, lambda_hi] with lambda_points entries.
    std::vector<double> lambda_sweep() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace rough
