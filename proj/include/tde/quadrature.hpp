#pragma once

#include <cstddef>
#include <vector>

#include "tde/bases.hpp"
#include "tde/interval.hpp"

namespace tde {

/// Nodes and positive weights of a quadrature rule on an interval.
/// Nodes are strictly inside the interval and ascending.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    Interval interval;

    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `points` nodes, exact for polynomials of degree
/// 2*points - 1. Throws input_error for points < 2 and domain_error for a
/// degenerate interval.
QuadratureGrid make_grid(Interval interval, int points);

/// Concatenation of Gauss-Legendre rules over the pieces cut by
/// interior_breaks (ascending, strictly inside the interval).
QuadratureGrid composite_grid(Interval interval, const std::vector<double>& interior_breaks,
                              int points_per_piece);

/// Rule with roughly the node budget of `grid` whose panels are aligned with
/// the cells of `basis`, so integrands that jump at cell boundaries are
/// smooth on every panel. Cell-free bases return the grid unchanged.
QuadratureGrid refine_for_basis(const QuadratureGrid& grid, const Basis& basis);

template <class F>
double integrate(const QuadratureGrid& grid, F&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) acc += grid.weights[i] * f(grid.nodes[i]);
    return acc;
}

}  // namespace tde
