#include "tde/bases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tde/errors.hpp"

namespace tde {
namespace {

bool power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

}  // namespace

BasisFamily BasisFamily::piecewise_polynomial(int r) {
    if (r < 0) throw dimension_error("piecewise polynomial degree must be >= 0");
    return {BasisKind::piecewise_polynomial, r};
}

bool BasisFamily::admissible_dim(int dim) const {
    if (dim < 1) return false;
    switch (kind) {
        case BasisKind::histogram:
            return power_of_two(dim);
        case BasisKind::trigonometric:
            return true;
        case BasisKind::piecewise_polynomial:
            return dim % (degree + 1) == 0 && power_of_two(dim / (degree + 1));
    }
    return false;
}

std::vector<int> BasisFamily::dimension_ladder(int max_dim) const {
    std::vector<int> dims;
    switch (kind) {
        case BasisKind::histogram:
            for (int d = 1; d <= max_dim; d *= 2) dims.push_back(d);
            break;
        case BasisKind::trigonometric:
            for (int d = 1; d <= max_dim; ++d) dims.push_back(d);
            break;
        case BasisKind::piecewise_polynomial:
            for (int d = degree + 1; d <= max_dim; d *= 2) dims.push_back(d);
            break;
    }
    return dims;
}

std::string BasisFamily::name() const {
    switch (kind) {
        case BasisKind::histogram:
            return "histogram";
        case BasisKind::trigonometric:
            return "trigonometric";
        case BasisKind::piecewise_polynomial:
            return "poly:" + std::to_string(degree);
    }
    return "";
}

BasisFamily BasisFamily::parse(const std::string& name) {
    if (name == "histogram") return histogram();
    if (name == "trigonometric") return trigonometric();
    if (name.rfind("poly:", 0) == 0) {
        const std::string tail = name.substr(5);
        std::size_t used = 0;
        int r = -1;
        try {
            r = std::stoi(tail, &used);
        } catch (const std::exception&) {
            throw config_error("basis family: bad polynomial degree in '" + name + "'");
        }
        if (used != tail.size() || r < 0)
            throw config_error("basis family: bad polynomial degree in '" + name + "'");
        return piecewise_polynomial(r);
    }
    throw config_error("basis family: unknown name '" + name + "'");
}

double phi1_constant(const BasisFamily& family) {
    switch (family.kind) {
        case BasisKind::histogram:
            return 1.0;
        case BasisKind::trigonometric:
            return 2.0;
        case BasisKind::piecewise_polynomial:
            // Sharp constant. On a cell of width w the normalized Legendre
            // values at the endpoint give sum_d phi_d^2 = (r+1)^2 / w, and a
            // coefficient vector aligned with that endpoint vector attains
            // sup |u|^2 = (r+1) * D * int u^2 on the unit interval.
            return family.degree + 1.0;
    }
    return 0.0;
}

void Basis::eval_into(double x, double* out) const {
    std::fill(out, out + dim_, 0.0);
    const double lo = interval_.lo;
    const double hi = interval_.hi;
    // Cell-supported families vanish off the interval. The trigonometric
    // formulas are defined on all of R and are periodic with the interval
    // length, so they are evaluated as written; fits therefore see
    // out-of-window observations at their periodic phase.
    const bool outside = x < lo || x > hi;
    if (outside && family_.kind != BasisKind::trigonometric) return;
    const double len = hi - lo;

    switch (family_.kind) {
        case BasisKind::histogram: {
            int cell = x == hi ? dim_ - 1 : static_cast<int>((x - lo) / len * dim_);
            cell = std::min(cell, dim_ - 1);
            out[cell] = std::sqrt(dim_ / len);
            break;
        }
        case BasisKind::trigonometric: {
            const double scale = 1.0 / std::sqrt(len);
            out[0] = scale;
            if (dim_ == 1) break;
            const double theta = 2.0 * std::numbers::pi * (x - lo) / len;
            const double c1 = std::cos(theta);
            const double s1 = std::sin(theta);
            const double amp = scale * std::numbers::sqrt2;
            double cj = c1;
            double sj = s1;
            for (int j = 1; 2 * j - 1 < dim_; ++j) {
                if (j > 1) {
                    // angle addition advances (cos, sin) by one frequency step
                    const double c = cj * c1 - sj * s1;
                    sj = sj * c1 + cj * s1;
                    cj = c;
                }
                out[2 * j - 1] = amp * sj;
                if (2 * j < dim_) out[2 * j] = amp * cj;
            }
            break;
        }
        case BasisKind::piecewise_polynomial: {
            const int r = family_.degree;
            const int cells = dim_ / (r + 1);
            int cell = x == hi ? cells - 1 : static_cast<int>((x - lo) / len * cells);
            cell = std::min(cell, cells - 1);
            const double w = len / cells;
            const double t = 2.0 * (x - lo - cell * w) / w - 1.0;
            double* cell_out = out + cell * (r + 1);
            cell_out[0] = std::sqrt(1.0 / w);
            if (r >= 1) {
                double p_prev = 1.0;
                double p_cur = t;
                cell_out[1] = std::sqrt(3.0 / w) * p_cur;
                for (int d = 2; d <= r; ++d) {
                    const double p_next =
                        ((2.0 * d - 1.0) * t * p_cur - (d - 1.0) * p_prev) / d;
                    p_prev = p_cur;
                    p_cur = p_next;
                    cell_out[d] = std::sqrt((2.0 * d + 1.0) / w) * p_cur;
                }
            }
            break;
        }
    }
}

std::vector<double> Basis::eval(double x) const {
    std::vector<double> out(dim_);
    eval_into(x, out.data());
    return out;
}

int Basis::cell_count() const {
    switch (family_.kind) {
        case BasisKind::histogram:
            return dim_;
        case BasisKind::trigonometric:
            return 1;
        case BasisKind::piecewise_polynomial:
            return dim_ / (family_.degree + 1);
    }
    return 1;
}

std::vector<double> Basis::interior_breakpoints() const {
    const int cells = cell_count();
    std::vector<double> breaks;
    breaks.reserve(cells - 1);
    const double len = interval_.length();
    for (int j = 1; j < cells; ++j) breaks.push_back(interval_.lo + j * len / cells);
    return breaks;
}

Basis make_basis(BasisFamily family, int dim, Interval interval) {
    if (!(interval.lo < interval.hi)) throw domain_error("basis interval is degenerate");
    if (!family.admissible_dim(dim))
        throw dimension_error("dimension " + std::to_string(dim) +
                              " is not admissible for family " + family.name());
    return Basis(family, dim, interval);
}

}  // namespace tde
