#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tde/chains.hpp"
#include "tde/estimator.hpp"
#include "tde/quadrature.hpp"

namespace tde {

/// Transition density and (optional) stationary density of the target chain,
/// decoupled from ChainSpec so synthetic truths can be tested.
struct Kernel {
    std::function<double(double, double)> pi;
    std::function<double(double)> f;  // empty when no closed form exists
};

Kernel kernel_of(const ChainSpec& spec);

/// (1/n) sum_i int_{A_y} (pi(X_i, y) - pi_hat(X_i, y))^2 dy over every
/// observed X_i, with pi_hat evaluated through the basis formulas (zero
/// outside the window for cell-supported families, periodic for the
/// trigonometric one). The grid is refined to panels aligned with the fit's
/// y cells before use.
double empirical_risk(const Fit& fit, const Kernel& kernel, const Path& path,
                      const QuadratureGrid& grid_y);
double empirical_risk(const Fit& fit, const ChainSpec& spec, const Path& path,
                      const QuadratureGrid& grid_y);

/// int int_{A} (pi - pi_hat)^2 dx dy over the model domain.
double l2_risk(const Fit& fit, const Kernel& kernel, const QuadratureGrid& grid_x,
               const QuadratureGrid& grid_y);
double l2_risk(const Fit& fit, const ChainSpec& spec, const QuadratureGrid& grid_x,
               const QuadratureGrid& grid_y);

/// int int_{A} (pi - pi_hat)^2 f(x) dx dy; throws unsupported_error when the
/// kernel has no stationary density.
double f_risk(const Fit& fit, const Kernel& kernel, const QuadratureGrid& grid_x,
              const QuadratureGrid& grid_y);
double f_risk(const Fit& fit, const ChainSpec& spec, const QuadratureGrid& grid_x,
              const QuadratureGrid& grid_y);

struct DimensionCount {
    int dim_x = 0;
    int dim_y = 0;
    int count = 0;
};

/// Monte-Carlo summary of one experiment cell. Risk fields are means over
/// replicates; standard errors are sample standard deviation / sqrt(N)
/// (zero when N = 1). mean_f and se_f are NaN when has_f is false.
struct RiskReport {
    std::string process;
    std::string family_x;
    std::string family_y;
    int n = 0;
    int replicates = 0;
    double pen_const = 0.0;
    double mean_empirical = 0.0;
    double se_empirical = 0.0;
    double mean_l2 = 0.0;
    double se_l2 = 0.0;
    double mean_f = 0.0;
    double se_f = 0.0;
    bool has_f = false;
    std::vector<DimensionCount> selected_dims;  // sorted by (dim_x, dim_y)
};

struct McOptions {
    int quad_points = 128;
    bool isotropic = false;
    std::optional<Rectangle> domain;  // default: default_domain(spec)
    int threads = 1;
};

/// Runs N replicates: simulate with replicate_seed(master_seed, k), select a
/// model, measure the empirical risk of the selected fit and the exact
/// risks of its truncation. Replicate k is fully determined by its seed and
/// reduction happens in replicate order, so reports are reproducible for a
/// fixed master seed regardless of thread count.
RiskReport mc_risk(const ChainSpec& spec, const BasisFamily& family_x,
                   const BasisFamily& family_y, int n, int replicates, const PenaltyConfig& cfg,
                   std::uint64_t master_seed, const McOptions& options = {});

/// Least-squares slope of log(risk) against log(n). Requires at least three
/// points, distinct n values and positive risks.
double rate_slope(std::span<const double> ns, std::span<const double> risks);

enum class RiskKind { empirical, l2, f_weighted };

/// Slope extracted from a sequence of reports for one experiment row.
double rate_slope(std::span<const RiskReport> reports, RiskKind kind);

}  // namespace tde
