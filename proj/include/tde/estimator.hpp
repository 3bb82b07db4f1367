#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tde/bases.hpp"
#include "tde/chains.hpp"
#include "tde/interval.hpp"

namespace tde {

/// Tensor-product projection space spanned by basis_x (in the first
/// coordinate) and basis_y (in the second).
struct Model {
    Basis basis_x;
    Basis basis_y;

    int dim_x() const { return basis_x.dim(); }
    int dim_y() const { return basis_y.dim(); }
    Rectangle domain() const { return {basis_x.interval(), basis_y.interval()}; }

    friend bool operator==(const Model&, const Model&) = default;
};

/// Least-squares estimate on a model:
/// pi_hat(x, y) = sum_{j,k} coefficients(j, k) phi_j(x) psi_k(y).
struct Fit {
    Model model;
    Eigen::MatrixXd coefficients;
    double contrast = 0.0;
    int n = 0;

    double l2_norm() const { return coefficients.norm(); }
};

/// G(j, l) = (1/n) sum_i phi_j(X_i) phi_l(X_i). Symmetric positive
/// semidefinite; singular exactly when some basis direction is unseen.
Eigen::MatrixXd gram_matrix(const Basis& basis, std::span<const double> xs);

/// Z(j, k) = (1/n) sum_i phi_j(X_i) psi_k(X_{i+1}) over the n transition
/// pairs of the path.
Eigen::MatrixXd cross_matrix(const Basis& basis_x, const Basis& basis_y, const Path& path);

/// Minimizes the empirical contrast
///   (1/n) sum_i [ int t(X_i, y)^2 dy - 2 t(X_i, X_{i+1}) ]
/// over the model by solving G A = Z through the spectral pseudoinverse of
/// G with cutoff sqrt(machine epsilon) * lambda_max. Among all minimizers
/// this picks the one with minimal Frobenius norm; the fitted values at the
/// data points are the same for every minimizer. The stored contrast equals
/// trace(A^T G A - 2 Z^T A).
Fit fit_model(const Model& model, const Path& path);

/// Contrast of an arbitrary coefficient matrix evaluated by direct
/// summation over the path; the y integral is exact by orthonormality.
double contrast_direct(const Eigen::MatrixXd& coefficients, const Model& model, const Path& path);

/// pi_hat(x, y) through the basis formulas: zero outside the model domain for
/// cell-supported families, periodic continuation for the trigonometric one.
double evaluate(const Fit& fit, double x, double y);

/// Keeps the fit when its L2 norm is at most n^(2/3), otherwise replaces it
/// with the zero estimate.
Fit truncate(const Fit& fit);

enum class PenaltyMode { fixed, simulation, random };

/// pen(m) = c * D1 * D2 / n, scaled by a sup-norm factor depending on mode:
/// fixed multiplies a user bound (theory constant c = 45), simulation uses
/// the bare complexity (desk constant c = 0.5), random multiplies a pilot
/// estimate of sup |pi| supplied per path.
struct PenaltyConfig {
    PenaltyMode mode = PenaltyMode::simulation;
    double constant = 0.5;
    double sup_norm_bound = 1.0;  // fixed mode only
    int pilot_grid = 101;         // random mode: pilot sup-norm scan resolution

    static PenaltyConfig simulation(double c = 0.5);
    static PenaltyConfig fixed(double bound, double c = 45.0);
    static PenaltyConfig random(int grid = 101, double c = 0.5);
};

double penalty(const Model& model, int n, const PenaltyConfig& cfg,
               std::optional<double> pilot_sup = std::nullopt);

/// All models with per-axis dimensions on the family ladders capped at
/// floor(n^(1/3)), or, in isotropic mode, square models with common
/// dimension capped at floor(sqrt(n)). Ordered by (dim_x, dim_y) ascending.
std::vector<Model> model_collection(const BasisFamily& family_x, const BasisFamily& family_y,
                                    int n, const Rectangle& domain, bool isotropic = false);

struct ModelDiagnostic {
    int dim_x = 0;
    int dim_y = 0;
    double contrast = 0.0;
    double penalty = 0.0;
    bool selected = false;
};

struct Selection {
    Fit fit;
    std::size_t selected_index = 0;
    std::vector<ModelDiagnostic> diagnostics;
    double pilot_value = 0.0;      // random mode only
    bool pilot_dim_clamped = false;
};

/// Fits every model and returns the minimizer of contrast + penalty. Ties
/// break toward the smaller product D1 * D2, then the smaller D1.
Selection select_model(const std::vector<Model>& collection, const Path& path,
                       const PenaltyConfig& cfg);

/// Pilot space dimension for the random penalty: the smallest integer in
/// [ceil(ln n), floor(n^(1/6))] when that interval is nonempty, otherwise
/// max(1, floor(n^(1/6))) with feasible = false.
struct PilotDims {
    int dim = 1;
    bool feasible = false;
};
PilotDims pilot_dims(int n);

/// Sup norm over an inclusive lattice of a square trigonometric pilot fit
/// with pilot_dims(n) functions per axis. Zero signals a degenerate path.
double pilot_sup_norm(const Path& path, const Rectangle& domain, int grid_points);

}  // namespace tde
