#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tde/config.hpp"
#include "tde/risk.hpp"

namespace tde {

/// Runs every (experiment, n) cell of the config and writes
/// <out_dir>/risks.csv plus a <out_dir>/risks.meta sidecar carrying the
/// config hash, the per-cell seeds and the selected-dimension counts.
/// Output bytes depend only on the configs, not on thread count.
std::vector<RiskReport> run_table(const std::vector<ExperimentConfig>& experiments,
                                  const std::string& out_dir, int threads = 1);

std::string risk_csv(const std::vector<RiskReport>& reports);

/// Seed used for the Monte-Carlo cell (experiment master seed, sample size).
std::uint64_t cell_seed(std::uint64_t master, int n);

/// Fits one path of length n + 1 seeded with the experiment seed, truncates,
/// and writes a (grid x grid) lattice of (x, y, pi_true, pi_hat) rows to
/// <out_dir>/surface.csv.
void export_surface(const ExperimentConfig& experiment, int n, int grid,
                    const std::string& out_dir);

/// Same fit as export_surface; writes <out_dir>/section_at_x.csv (y varies,
/// x = x0) and <out_dir>/section_at_y.csv (x varies, y = y0), each holding
/// (coord, pi_true, pi_hat) rows. Coordinates outside the domain throw
/// input_error.
void export_sections(const ExperimentConfig& experiment, int n, double x0, double y0, int points,
                     const std::string& out_dir);

/// Runs model selection on one path and writes the per-model diagnostics
/// (family_x, family_y, D1, D2, contrast, penalty, selected) to
/// <out_dir>/selection.csv.
void export_selection_trace(const ExperimentConfig& experiment, int n,
                            const std::string& out_dir);

}  // namespace tde
