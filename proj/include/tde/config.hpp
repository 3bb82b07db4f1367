#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tde/bases.hpp"
#include "tde/chains.hpp"
#include "tde/estimator.hpp"
#include "tde/interval.hpp"

namespace tde {

/// One experiment section of a config file: a process, an estimation window,
/// a pair of basis families, sample sizes and the Monte-Carlo setup.
/// Keys listed before the first [section] act as defaults for every section.
struct ExperimentConfig {
    std::string name = "default";
    std::string process = "ar1";  // "ar1", "radial_ou" or "arch"
    double a = 0.5;
    double b = 3.0;
    double sigma = 1.0;
    double beta = 3.0;
    int burn_in = 1000;
    Rectangle domain{{4.0, 8.0}, {4.0, 8.0}};
    bool domain_given = false;  // parse detail, not compared
    BasisFamily family_x = BasisFamily::histogram();
    BasisFamily family_y = BasisFamily::histogram();
    std::vector<int> n_values{50, 100, 250, 500, 1000};
    int replicates = 200;
    PenaltyMode penalty_mode = PenaltyMode::simulation;
    double penalty_constant = 0.5;
    double sup_norm_bound = 1.0;
    int pilot_grid = 101;
    bool isotropic = false;
    std::uint64_t seed = 1;
    int quad_points = 128;

    ChainSpec chain() const;
    PenaltyConfig penalty() const;

    friend bool operator==(const ExperimentConfig& lhs, const ExperimentConfig& rhs);
};

/// Parses config text. Unknown keys, malformed values and inconsistent
/// parameters throw config_error naming the offending key. A file without
/// section headers defines a single experiment named "default".
std::vector<ExperimentConfig> parse_config(const std::string& text);
std::vector<ExperimentConfig> parse_config_file(const std::string& path);

/// Canonical text form; parse_config(serialize_config(v)) == v.
std::string serialize_config(const std::vector<ExperimentConfig>& experiments);

/// FNV-1a hash of the canonical text, recorded next to result files.
std::uint64_t config_hash(const std::vector<ExperimentConfig>& experiments);

}  // namespace tde
