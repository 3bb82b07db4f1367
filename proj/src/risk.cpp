#include "tde/risk.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "tde/errors.hpp"

namespace tde {
namespace {

Eigen::MatrixXd basis_values(const Basis& basis, const std::vector<double>& points) {
    Eigen::MatrixXd m(points.size(), basis.dim());
    std::vector<double> buf(basis.dim());
    for (std::size_t i = 0; i < points.size(); ++i) {
        basis.eval_into(points[i], buf.data());
        for (int j = 0; j < basis.dim(); ++j) m(i, j) = buf[j];
    }
    return m;
}

void check_grid(const QuadratureGrid& grid, const Interval& interval, const char* which) {
    if (!(grid.interval == interval))
        throw input_error(std::string("risk: ") + which + " grid does not match the model domain");
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / v.size();
}

double se_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / (v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

Kernel kernel_of(const ChainSpec& spec) {
    Kernel kernel;
    kernel.pi = [spec](double x, double y) { return transition_density(spec, x, y); };
    if (has_stationary_density(spec))
        kernel.f = [spec](double x) { return stationary_density(spec, x); };
    return kernel;
}

double empirical_risk(const Fit& fit, const Kernel& kernel, const Path& path,
                      const QuadratureGrid& grid_y) {
    if (path.values.size() < 2) throw input_error("empirical_risk needs at least one transition");
    check_grid(grid_y, fit.model.basis_y.interval(), "y");
    const QuadratureGrid gy = refine_for_basis(grid_y, fit.model.basis_y);
    const Eigen::MatrixXd psi = basis_values(fit.model.basis_y, gy.nodes);
    const int n = path.n();
    const int d1 = fit.model.dim_x();
    std::vector<double> fx(d1);
    double acc = 0.0;
    // Every observed x contributes; the estimate at x is whatever the basis
    // formulas give there (zero for cell-supported families outside their
    // window, the periodic value for the trigonometric one), so observations
    // that leave the window still pay the full squared truth.
    for (int i = 0; i < n; ++i) {
        const double x = path.values[i];
        fit.model.basis_x.eval_into(x, fx.data());
        Eigen::Map<const Eigen::VectorXd> phi(fx.data(), d1);
        const Eigen::VectorXd fitted = psi * (fit.coefficients.transpose() * phi);
        for (std::size_t q = 0; q < gy.size(); ++q) {
            const double diff = kernel.pi(x, gy.nodes[q]) - fitted[q];
            acc += gy.weights[q] * diff * diff;
        }
    }
    return acc / n;
}

double empirical_risk(const Fit& fit, const ChainSpec& spec, const Path& path,
                      const QuadratureGrid& grid_y) {
    return empirical_risk(fit, kernel_of(spec), path, grid_y);
}

namespace {

// Shared core of the two exact risks: integrates (pi - pi_hat)^2 times an
// x-dependent weight over the model domain on cell-aligned panels.
double weighted_l2(const Fit& fit, const Kernel& kernel, const QuadratureGrid& grid_x,
                   const QuadratureGrid& grid_y, bool weight_by_f) {
    check_grid(grid_x, fit.model.basis_x.interval(), "x");
    check_grid(grid_y, fit.model.basis_y.interval(), "y");
    if (weight_by_f && !kernel.f)
        throw unsupported_error("f-weighted risk needs a stationary density");
    const QuadratureGrid gx = refine_for_basis(grid_x, fit.model.basis_x);
    const QuadratureGrid gy = refine_for_basis(grid_y, fit.model.basis_y);
    const Eigen::MatrixXd phi = basis_values(fit.model.basis_x, gx.nodes);
    const Eigen::MatrixXd psi = basis_values(fit.model.basis_y, gy.nodes);
    const Eigen::MatrixXd fitted = phi * fit.coefficients * psi.transpose();
    double acc = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
        const double x = gx.nodes[i];
        const double wx = gx.weights[i] * (weight_by_f ? kernel.f(x) : 1.0);
        double row = 0.0;
        for (std::size_t q = 0; q < gy.size(); ++q) {
            const double diff = kernel.pi(x, gy.nodes[q]) - fitted(i, q);
            row += gy.weights[q] * diff * diff;
        }
        acc += wx * row;
    }
    return acc;
}

}  // namespace

double l2_risk(const Fit& fit, const Kernel& kernel, const QuadratureGrid& grid_x,
               const QuadratureGrid& grid_y) {
    return weighted_l2(fit, kernel, grid_x, grid_y, false);
}

double l2_risk(const Fit& fit, const ChainSpec& spec, const QuadratureGrid& grid_x,
               const QuadratureGrid& grid_y) {
    return weighted_l2(fit, kernel_of(spec), grid_x, grid_y, false);
}

double f_risk(const Fit& fit, const Kernel& kernel, const QuadratureGrid& grid_x,
              const QuadratureGrid& grid_y) {
    return weighted_l2(fit, kernel, grid_x, grid_y, true);
}

double f_risk(const Fit& fit, const ChainSpec& spec, const QuadratureGrid& grid_x,
              const QuadratureGrid& grid_y) {
    return weighted_l2(fit, kernel_of(spec), grid_x, grid_y, true);
}

RiskReport mc_risk(const ChainSpec& spec, const BasisFamily& family_x,
                   const BasisFamily& family_y, int n, int replicates, const PenaltyConfig& cfg,
                   std::uint64_t master_seed, const McOptions& options) {
    if (replicates < 1) throw input_error("mc_risk requires at least one replicate");
    const Rectangle domain = options.domain ? *options.domain : default_domain(spec);
    const Kernel kernel = kernel_of(spec);
    const QuadratureGrid grid_x = make_grid(domain.x, options.quad_points);
    const QuadratureGrid grid_y = make_grid(domain.y, options.quad_points);
    const std::vector<Model> models =
        model_collection(family_x, family_y, n, domain, options.isotropic);

    struct ReplicateResult {
        double emp = 0.0, l2 = 0.0, f = 0.0;
        int dim_x = 0, dim_y = 0;
    };
    std::vector<ReplicateResult> results(replicates);
    auto run_replicate = [&](int k) {
        const Path path = simulate(spec, n, replicate_seed(master_seed, k));
        Selection sel = select_model(models, path, cfg);
        ReplicateResult r;
        r.emp = empirical_risk(sel.fit, kernel, path, grid_y);
        const Fit trimmed = truncate(sel.fit);
        r.l2 = l2_risk(trimmed, kernel, grid_x, grid_y);
        r.f = kernel.f ? f_risk(trimmed, kernel, grid_x, grid_y)
                       : std::numeric_limits<double>::quiet_NaN();
        r.dim_x = sel.fit.model.dim_x();
        r.dim_y = sel.fit.model.dim_y();
        results[k] = r;
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1) {
        for (int k = 0; k < replicates; ++k) run_replicate(k);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int k = t; k < replicates; k += threads) run_replicate(k);
            });
        }
        for (auto& th : pool) th.join();
    }

    // reduce in replicate order so the report is thread-count independent
    std::vector<double> emp(replicates), l2(replicates), fw(replicates);
    std::map<std::pair<int, int>, int> dims;
    for (int k = 0; k < replicates; ++k) {
        emp[k] = results[k].emp;
        l2[k] = results[k].l2;
        fw[k] = results[k].f;
        ++dims[{results[k].dim_x, results[k].dim_y}];
    }

    RiskReport report;
    report.process = spec.name();
    report.family_x = family_x.name();
    report.family_y = family_y.name();
    report.n = n;
    report.replicates = replicates;
    report.pen_const = cfg.constant;
    report.mean_empirical = mean_of(emp);
    report.se_empirical = se_of(emp, report.mean_empirical);
    report.mean_l2 = mean_of(l2);
    report.se_l2 = se_of(l2, report.mean_l2);
    report.has_f = static_cast<bool>(kernel.f);
    if (report.has_f) {
        report.mean_f = mean_of(fw);
        report.se_f = se_of(fw, report.mean_f);
    } else {
        report.mean_f = std::numeric_limits<double>::quiet_NaN();
        report.se_f = std::numeric_limits<double>::quiet_NaN();
    }
    for (const auto& [key, count] : dims)
        report.selected_dims.push_back({key.first, key.second, count});
    return report;
}

double rate_slope(std::span<const double> ns, std::span<const double> risks) {
    if (ns.size() != risks.size()) throw input_error("rate_slope: size mismatch");
    if (ns.size() < 3) throw input_error("rate_slope needs at least three points");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ns[i] > 0.0) || !(risks[i] > 0.0))
            throw input_error("rate_slope needs positive n and risks");
        for (std::size_t j = 0; j < i; ++j)
            if (ns[i] == ns[j]) throw input_error("rate_slope needs distinct n values");
    }
    const std::size_t m = ns.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double lx = std::log(ns[i]);
        const double ly = std::log(risks[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double rate_slope(std::span<const RiskReport> reports, RiskKind kind) {
    std::vector<double> ns, risks;
    ns.reserve(reports.size());
    risks.reserve(reports.size());
    for (const RiskReport& r : reports) {
        ns.push_back(static_cast<double>(r.n));
        switch (kind) {
            case RiskKind::empirical:
                risks.push_back(r.mean_empirical);
                break;
            case RiskKind::l2:
                risks.push_back(r.mean_l2);
                break;
            case RiskKind::f_weighted:
                if (!r.has_f) throw unsupported_error("rate_slope: report has no f-weighted risk");
                risks.push_back(r.mean_f);
                break;
        }
    }
    return rate_slope(std::span<const double>(ns), std::span<const double>(risks));
}

}  // namespace tde
