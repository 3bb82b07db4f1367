#include "tde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tde/errors.hpp"

namespace tde {
namespace {

// Legendre nodes and weights on [-1, 1] by Newton iteration from the
// Chebyshev initial guess; symmetric pairs are mirrored.
void legendre_reference(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(m, 0.0);
    weights.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double deriv = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p_prev = 1.0;
            double p_cur = z;
            for (int j = 2; j <= m; ++j) {
                const double p_next = ((2.0 * j - 1.0) * z * p_cur - (j - 1.0) * p_prev) / j;
                p_prev = p_cur;
                p_cur = p_next;
            }
            deriv = m * (z * p_cur - p_prev) / (z * z - 1.0);
            const double step = p_cur / deriv;
            z -= step;
            if (std::abs(step) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        nodes[i] = -z;
        nodes[m - 1 - i] = z;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) nodes[m / 2] = 0.0;  // exact symmetry for the middle node
}

void append_mapped(QuadratureGrid& grid, double lo, double hi, const std::vector<double>& ref_nodes,
                   const std::vector<double>& ref_weights) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < ref_nodes.size(); ++i) {
        grid.nodes.push_back(mid + half * ref_nodes[i]);
        grid.weights.push_back(half * ref_weights[i]);
    }
}

}  // namespace

QuadratureGrid make_grid(Interval interval, int points) {
    if (!(interval.lo < interval.hi)) throw domain_error("quadrature interval is degenerate");
    if (points < 2) throw input_error("make_grid requires at least 2 points");
    std::vector<double> ref_nodes, ref_weights;
    legendre_reference(points, ref_nodes, ref_weights);
    QuadratureGrid grid;
    grid.interval = interval;
    grid.nodes.reserve(points);
    grid.weights.reserve(points);
    append_mapped(grid, interval.lo, interval.hi, ref_nodes, ref_weights);
    return grid;
}

QuadratureGrid composite_grid(Interval interval, const std::vector<double>& interior_breaks,
                              int points_per_piece) {
    if (!(interval.lo < interval.hi)) throw domain_error("quadrature interval is degenerate");
    if (points_per_piece < 2) throw input_error("composite_grid requires at least 2 points per piece");
    for (std::size_t i = 0; i < interior_breaks.size(); ++i) {
        const double prev = i == 0 ? interval.lo : interior_breaks[i - 1];
        if (!(prev < interior_breaks[i] && interior_breaks[i] < interval.hi))
            throw input_error("composite_grid breakpoints must be ascending and interior");
    }
    std::vector<double> ref_nodes, ref_weights;
    legendre_reference(points_per_piece, ref_nodes, ref_weights);
    QuadratureGrid grid;
    grid.interval = interval;
    grid.nodes.reserve(points_per_piece * (interior_breaks.size() + 1));
    grid.weights.reserve(points_per_piece * (interior_breaks.size() + 1));
    double lo = interval.lo;
    for (double b : interior_breaks) {
        append_mapped(grid, lo, b, ref_nodes, ref_weights);
        lo = b;
    }
    append_mapped(grid, lo, interval.hi, ref_nodes, ref_weights);
    return grid;
}

QuadratureGrid refine_for_basis(const QuadratureGrid& grid, const Basis& basis) {
    if (!(grid.interval == basis.interval()))
        throw input_error("refine_for_basis: grid and basis intervals differ");
    const std::vector<double> breaks = basis.interior_breakpoints();
    if (breaks.empty()) return grid;
    const int pieces = static_cast<int>(breaks.size()) + 1;
    const int per_piece =
        std::max<int>(4, static_cast<int>((grid.size() + pieces - 1) / pieces));
    return composite_grid(grid.interval, breaks, per_piece);
}

}  // namespace tde
