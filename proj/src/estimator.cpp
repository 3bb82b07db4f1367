#include "tde/estimator.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "tde/errors.hpp"

namespace tde {
namespace {

// Largest d >= 1 with d^power <= n, in exact integer arithmetic.
int integer_root(int n, int power) {
    int d = 1;
    while (true) {
        long long p = 1;
        for (int i = 0; i < power; ++i) p *= (d + 1);
        if (p > n) return d;
        ++d;
    }
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const double lambda_max = lambda.size() > 0 ? lambda.maxCoeff() : 0.0;
    const double cutoff = std::sqrt(std::numeric_limits<double>::epsilon()) * lambda_max;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (lambda[i] > cutoff && lambda[i] > 0.0) inv[i] = 1.0 / lambda[i];
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Fit assemble_fit(const Model& model, const Eigen::MatrixXd& g, const Eigen::MatrixXd& z, int n) {
    Eigen::MatrixXd a = pseudo_inverse(g) * z;
    const double contrast = (g * a - 2.0 * z).cwiseProduct(a).sum();
    return Fit{model, std::move(a), contrast, n};
}

// n x D matrix of basis values over a range of path entries.
Eigen::MatrixXd eval_matrix(const Basis& basis, const double* xs, int n) {
    Eigen::MatrixXd m(n, basis.dim());
    std::vector<double> buf(basis.dim());
    for (int i = 0; i < n; ++i) {
        basis.eval_into(xs[i], buf.data());
        for (int j = 0; j < basis.dim(); ++j) m(i, j) = buf[j];
    }
    return m;
}

}  // namespace

Eigen::MatrixXd gram_matrix(const Basis& basis, std::span<const double> xs) {
    if (xs.empty()) throw input_error("gram_matrix needs at least one observation");
    const int d = basis.dim();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    std::vector<double> buf(d);
    for (double x : xs) {
        basis.eval_into(x, buf.data());
        for (int j = 0; j < d; ++j) {
            if (buf[j] == 0.0) continue;  // localized families touch one cell
            for (int l = j; l < d; ++l) g(j, l) += buf[j] * buf[l];
        }
    }
    g /= static_cast<double>(xs.size());
    return g.selfadjointView<Eigen::Upper>();
}

Eigen::MatrixXd cross_matrix(const Basis& basis_x, const Basis& basis_y, const Path& path) {
    if (path.values.size() < 2) throw input_error("cross_matrix needs at least one transition");
    const int n = path.n();
    const int d1 = basis_x.dim();
    const int d2 = basis_y.dim();
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(d1, d2);
    std::vector<double> fx(d1), fy(d2);
    for (int i = 0; i < n; ++i) {
        basis_x.eval_into(path.values[i], fx.data());
        basis_y.eval_into(path.values[i + 1], fy.data());
        for (int j = 0; j < d1; ++j) {
            if (fx[j] == 0.0) continue;
            for (int k = 0; k < d2; ++k) z(j, k) += fx[j] * fy[k];
        }
    }
    z /= static_cast<double>(n);
    return z;
}

Fit fit_model(const Model& model, const Path& path) {
    if (path.values.size() < 2) throw input_error("fit_model needs at least one transition");
    const int n = path.n();
    const Eigen::MatrixXd g =
        gram_matrix(model.basis_x, std::span<const double>(path.values.data(), n));
    const Eigen::MatrixXd z = cross_matrix(model.basis_x, model.basis_y, path);
    return assemble_fit(model, g, z, n);
}

double contrast_direct(const Eigen::MatrixXd& coefficients, const Model& model, const Path& path) {
    if (coefficients.rows() != model.dim_x() || coefficients.cols() != model.dim_y())
        throw input_error("contrast_direct: coefficient shape does not match the model");
    if (path.values.size() < 2) throw input_error("contrast_direct needs at least one transition");
    const int n = path.n();
    const int d1 = model.dim_x();
    const int d2 = model.dim_y();
    std::vector<double> fx(d1), fy(d2);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        model.basis_x.eval_into(path.values[i], fx.data());
        model.basis_y.eval_into(path.values[i + 1], fy.data());
        Eigen::Map<const Eigen::VectorXd> phi(fx.data(), d1);
        Eigen::Map<const Eigen::VectorXd> psi(fy.data(), d2);
        // int t(X_i, y)^2 dy = |A^T phi(X_i)|^2 by orthonormality in y
        const Eigen::VectorXd row = coefficients.transpose() * phi;
        acc += row.squaredNorm() - 2.0 * row.dot(psi);
    }
    return acc / n;
}

double evaluate(const Fit& fit, double x, double y) {
    const int d1 = fit.model.dim_x();
    const int d2 = fit.model.dim_y();
    std::vector<double> fx(d1), fy(d2);
    fit.model.basis_x.eval_into(x, fx.data());
    fit.model.basis_y.eval_into(y, fy.data());
    Eigen::Map<const Eigen::VectorXd> phi(fx.data(), d1);
    Eigen::Map<const Eigen::VectorXd> psi(fy.data(), d2);
    return phi.dot(fit.coefficients * psi);
}

Fit truncate(const Fit& fit) {
    const double bound = std::pow(static_cast<double>(fit.n), 2.0 / 3.0);
    if (fit.l2_norm() <= bound) return fit;
    Fit zero = fit;
    zero.coefficients.setZero();
    zero.contrast = 0.0;
    return zero;
}

PenaltyConfig PenaltyConfig::simulation(double c) { return {PenaltyMode::simulation, c, 1.0, 101}; }

PenaltyConfig PenaltyConfig::fixed(double bound, double c) {
    return {PenaltyMode::fixed, c, bound, 101};
}

PenaltyConfig PenaltyConfig::random(int grid, double c) {
    return {PenaltyMode::random, c, 1.0, grid};
}

double penalty(const Model& model, int n, const PenaltyConfig& cfg,
               std::optional<double> pilot_sup) {
    if (n < 1) throw input_error("penalty requires n >= 1");
    if (!(cfg.constant > 0.0)) throw input_error("penalty constant must be > 0");
    const double complexity = static_cast<double>(model.dim_x()) * model.dim_y() / n;
    switch (cfg.mode) {
        case PenaltyMode::simulation:
            return cfg.constant * complexity;
        case PenaltyMode::fixed:
            if (!(cfg.sup_norm_bound > 0.0))
                throw input_error("fixed penalty needs a positive sup-norm bound");
            return cfg.constant * cfg.sup_norm_bound * complexity;
        case PenaltyMode::random:
            if (!pilot_sup) throw input_error("random penalty needs a pilot sup-norm value");
            return cfg.constant * *pilot_sup * complexity;
    }
    return 0.0;
}

std::vector<Model> model_collection(const BasisFamily& family_x, const BasisFamily& family_y,
                                    int n, const Rectangle& domain, bool isotropic) {
    if (n < 8) throw config_error("n: model collection requires n >= 8");
    std::vector<Model> models;
    if (isotropic) {
        const int cap = integer_root(n, 2);
        for (int d = 1; d <= cap; ++d) {
            if (family_x.admissible_dim(d) && family_y.admissible_dim(d))
                models.push_back(
                    {make_basis(family_x, d, domain.x), make_basis(family_y, d, domain.y)});
        }
    } else {
        const int cap = integer_root(n, 3);
        for (int dx : family_x.dimension_ladder(cap))
            for (int dy : family_y.dimension_ladder(cap))
                models.push_back(
                    {make_basis(family_x, dx, domain.x), make_basis(family_y, dy, domain.y)});
    }
    if (models.empty())
        throw config_error("family_x/family_y: no admissible model dimension fits this n");
    return models;
}

Selection select_model(const std::vector<Model>& collection, const Path& path,
                       const PenaltyConfig& cfg) {
    if (collection.empty()) throw input_error("select_model needs a nonempty collection");
    if (path.values.size() < 2) throw input_error("select_model needs at least one transition");
    const int n = path.n();

    std::optional<double> pilot;
    bool clamped = false;
    if (cfg.mode == PenaltyMode::random) {
        pilot = pilot_sup_norm(path, collection.front().domain(), cfg.pilot_grid);
        clamped = !pilot_dims(n).feasible;
    }

    // Basis evaluations, Gram matrices and their pseudoinverses are shared
    // between models with a common marginal basis.
    std::vector<std::pair<Basis, Eigen::MatrixXd>> x_eval, y_eval;
    std::vector<std::pair<Basis, std::pair<Eigen::MatrixXd, Eigen::MatrixXd>>> grams;
    auto eval_for = [&](const Basis& basis, bool first_axis) -> const Eigen::MatrixXd& {
        auto& cache = first_axis ? x_eval : y_eval;
        for (const auto& entry : cache)
            if (entry.first == basis) return entry.second;
        const double* start = path.values.data() + (first_axis ? 0 : 1);
        cache.emplace_back(basis, eval_matrix(basis, start, n));
        return cache.back().second;
    };
    auto gram_for = [&](const Basis& basis) -> const std::pair<Eigen::MatrixXd, Eigen::MatrixXd>& {
        for (const auto& entry : grams)
            if (entry.first == basis) return entry.second;
        Eigen::MatrixXd g = eval_for(basis, true).transpose() * eval_for(basis, true) / n;
        Eigen::MatrixXd ginv = pseudo_inverse(g);
        grams.emplace_back(basis, std::make_pair(std::move(g), std::move(ginv)));
        return grams.back().second;
    };

    std::vector<ModelDiagnostic> diagnostics;
    diagnostics.reserve(collection.size());
    std::size_t best_index = 0;
    double best_value = std::numeric_limits<double>::infinity();
    long long best_product = 0;
    int best_d1 = 0;
    Eigen::MatrixXd best_coeffs;
    double best_contrast = 0.0;

    for (std::size_t idx = 0; idx < collection.size(); ++idx) {
        const Model& model = collection[idx];
        const auto& [g, ginv] = gram_for(model.basis_x);
        const Eigen::MatrixXd z =
            eval_for(model.basis_x, true).transpose() * eval_for(model.basis_y, false) / n;
        Eigen::MatrixXd a = ginv * z;
        const double contrast = (g * a - 2.0 * z).cwiseProduct(a).sum();
        const double pen = penalty(model, n, cfg, pilot);
        diagnostics.push_back({model.dim_x(), model.dim_y(), contrast, pen, false});

        const double value = contrast + pen;
        const long long product =
            static_cast<long long>(model.dim_x()) * model.dim_y();
        const bool better = value < best_value ||
                            (value == best_value &&
                             (product < best_product ||
                              (product == best_product && model.dim_x() < best_d1)));
        if (idx == 0 || better) {
            best_index = idx;
            best_value = value;
            best_product = product;
            best_d1 = model.dim_x();
            best_coeffs = std::move(a);
            best_contrast = contrast;
        }
    }
    diagnostics[best_index].selected = true;

    Selection sel{Fit{collection[best_index], std::move(best_coeffs), best_contrast, n},
                  best_index, std::move(diagnostics), pilot.value_or(0.0), clamped};
    return sel;
}

PilotDims pilot_dims(int n) {
    if (n < 1) throw input_error("pilot_dims requires n >= 1");
    const int lower = static_cast<int>(std::ceil(std::log(static_cast<double>(n))));
    const int upper = integer_root(n, 6);
    if (lower <= upper) return {std::max(1, lower), true};
    return {std::max(1, upper), false};
}

double pilot_sup_norm(const Path& path, const Rectangle& domain, int grid_points) {
    if (path.values.size() < 2) throw input_error("pilot_sup_norm needs at least one transition");
    if (grid_points < 1) throw input_error("pilot_sup_norm needs grid_points >= 1");
    const int d = pilot_dims(path.n()).dim;
    const Model pilot{make_basis(BasisFamily::trigonometric(), d, domain.x),
                      make_basis(BasisFamily::trigonometric(), d, domain.y)};
    const Fit fit = fit_model(pilot, path);
    auto lattice = [&](const Interval& iv, int i) {
        if (grid_points == 1) return 0.5 * (iv.lo + iv.hi);
        return iv.lo + iv.length() * i / (grid_points - 1);
    };
    double sup = 0.0;
    for (int i = 0; i < grid_points; ++i)
        for (int j = 0; j < grid_points; ++j)
            sup = std::max(sup, std::abs(evaluate(fit, lattice(domain.x, i), lattice(domain.y, j))));
    return sup;
}

}  // namespace tde
