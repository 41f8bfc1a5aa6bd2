#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lureid/sector_bounds.hpp"

namespace lureid {

/// Tabulated map with monotone cubic (Fritsch-Carlson) interpolation and
/// linear extrapolation outside the table range.
class TabulatedFn {
public:
    TabulatedFn(std::vector<double> xs, std::vector<double> ys);

    double eval(double x) const;
    double derivative(double x) const;

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

private:
    std::vector<double> xs_, ys_, tangents_;
};

/// One basis function of the expansion h(v) = a1 v + sum_j a_j phi_j(v).
class BasisFn {
public:
    enum class Kind { monomial, hinge_pos, hinge_neg, tabulated };

    static BasisFn monomial(int power);                ///< v^j, j >= 2
    static BasisFn hinge_pos(double breakpoint);       ///< max{0, v - b}
    static BasisFn hinge_neg(double breakpoint);       ///< max{0, -(v + b)}
    static BasisFn tabulated(std::vector<double> xs, std::vector<double> ys);

    double eval(double v) const;
    double derivative(double v) const;

    Kind kind() const { return kind_; }
    double param() const { return param_; }
    const TabulatedFn* table() const { return table_.get(); }
    std::string describe() const;

    bool operator==(const BasisFn& other) const;

private:
    BasisFn(Kind kind, double param) : kind_(kind), param_(param) {}
    Kind kind_;
    double param_ = 0.0;
    std::shared_ptr<const TabulatedFn> table_;
};

/// Static nonlinearity as linear term plus basis expansion. Immutable.
/// The accumulated gain shift is kept separate from the base linear
/// coefficient so gain_shift(gain_shift(nl, k), -k) restores the original
/// object exactly.
class StaticNL {
public:
    struct Term {
        double coeff;
        BasisFn basis;
        bool operator==(const Term&) const = default;
    };

    /// Identically zero map (empty expansion).
    StaticNL() : a1_(0.0), base_sector_(0.0, 0.0), domain_hint_(-1.0, 1.0) {}

    StaticNL(double a1, std::vector<Term> terms, SectorBounds declared_sector,
             std::pair<double, double> domain_hint);

    double eval(double v) const;
    double derivative(double v) const;

    double linear_coeff() const { return a1_ + shift_; }
    double base_linear_coeff() const { return a1_; }
    double shift() const { return shift_; }
    const std::vector<Term>& terms() const { return terms_; }
    SectorBounds declared_sector() const { return base_sector_.shifted(shift_); }
    std::pair<double, double> domain_hint() const { return domain_hint_; }

    /// h_k(v) = h(v) + k v, sector shifted by k.
    StaticNL gain_shift(double k) const;

    /// Copy with the nonlinear terms only (linear coefficient zero).
    StaticNL nonlinear_part() const;

    bool operator==(const StaticNL& other) const = default;

private:
    double a1_;
    double shift_ = 0.0;
    std::vector<Term> terms_;
    SectorBounds base_sector_;
    std::pair<double, double> domain_hint_;
};

/// Extremal difference quotients of nl over a uniform grid on `interval`.
/// Adjacent-pair quotients are extremal among all pairs (any chord slope is
/// a weighted mean of its sub-chord slopes), so the scan is O(n).
SectorBounds empirical_sector(const StaticNL& nl, std::pair<double, double> interval,
                              int grid_points);

/// Built-in characteristics: "fhn" (cubic) and "chua" (piecewise linear in
/// the hinge basis). Throws on unknown names.
StaticNL builtin_nonlinearity(const std::string& name);

}  // namespace lureid
