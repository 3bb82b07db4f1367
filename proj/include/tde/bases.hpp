#pragma once

#include <string>
#include <vector>

#include "tde/interval.hpp"

namespace tde {

enum class BasisKind { histogram, trigonometric, piecewise_polynomial };

/// One of the orthonormal function families used to span projection spaces.
/// Piecewise polynomials carry their maximal degree r; the other kinds
/// ignore the degree field.
struct BasisFamily {
    BasisKind kind = BasisKind::histogram;
    int degree = 0;

    static BasisFamily histogram() { return {BasisKind::histogram, 0}; }
    static BasisFamily trigonometric() { return {BasisKind::trigonometric, 0}; }
    static BasisFamily piecewise_polynomial(int r);

    /// Histogram dimensions are powers of two, piecewise polynomial
    /// dimensions are (r+1)*2^k, trigonometric dimensions are unrestricted.
    bool admissible_dim(int dim) const;

    /// All admissible dimensions up to max_dim, ascending.
    std::vector<int> dimension_ladder(int max_dim) const;

    /// Config-file name: "histogram", "trigonometric" or "poly:<r>".
    std::string name() const;
    static BasisFamily parse(const std::string& name);

    friend bool operator==(const BasisFamily&, const BasisFamily&) = default;
};

/// Norm connection on the unit interval: sup |u|^2 <= phi1 * D * int u^2
/// for every u in the span of a D-dimensional basis of the family.
/// On an interval of length L the right side picks up a factor 1/L.
double phi1_constant(const BasisFamily& family);

/// An orthonormal basis of `dim` functions on `interval`, obtained from the
/// reference family on [0,1] by the isometric rescaling
/// phi^{[a,b]}_j(x) = (b-a)^{-1/2} phi_j((x-a)/(b-a)).
/// Cell-supported families (histogram, piecewise polynomial) vanish outside
/// the closed interval; the trigonometric formulas are periodic and evaluate
/// as written everywhere, so observations beyond the window enter fits at
/// their periodic phase. Evaluation is pure and thread safe.
///
/// Orderings: histogram cells run left to right and are half open, with the
/// last cell closed at the right endpoint. Trigonometric functions come as
/// constant, then sine and cosine in increasing frequency. Piecewise
/// polynomials are ordered by (cell, degree) lexicographically.
class Basis {
public:
    const BasisFamily& family() const { return family_; }
    int dim() const { return dim_; }
    Interval interval() const { return interval_; }

    /// Writes (phi_1(x), ..., phi_D(x)) into out[0..D-1].
    void eval_into(double x, double* out) const;
    std::vector<double> eval(double x) const;

    /// Number of support cells (1 for the trigonometric family).
    int cell_count() const;
    /// Cell boundaries strictly inside the interval, ascending.
    std::vector<double> interior_breakpoints() const;

    double phi1() const { return phi1_constant(family_); }

    friend Basis make_basis(BasisFamily family, int dim, Interval interval);
    friend bool operator==(const Basis&, const Basis&) = default;

private:
    Basis(BasisFamily family, int dim, Interval interval)
        : family_(family), dim_(dim), interval_(interval) {}

    BasisFamily family_;
    int dim_;
    Interval interval_;
};

/// Throws dimension_error for an inadmissible dim and domain_error for a
/// degenerate interval.
Basis make_basis(BasisFamily family, int dim, Interval interval);

}  // namespace tde
