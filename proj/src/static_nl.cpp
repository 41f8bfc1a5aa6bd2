#include "lureid/static_nl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lureid {

// ---------------------------------------------------------------------------
// TabulatedFn
// ---------------------------------------------------------------------------

TabulatedFn::TabulatedFn(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
        throw std::invalid_argument("TabulatedFn: need >= 2 matching samples");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw std::invalid_argument("TabulatedFn: abscissae must be strictly increasing");

    // Fritsch-Carlson tangents: shape-preserving, Lipschitz on bounded sets.
    const std::size_t n = xs_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        secant[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    tangents_.assign(n, 0.0);
    tangents_[0] = secant[0];
    tangents_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        tangents_[i] = (secant[i - 1] * secant[i] > 0.0) ? 0.5 * (secant[i - 1] + secant[i]) : 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (secant[i] == 0.0) {
            tangents_[i] = tangents_[i + 1] = 0.0;
            continue;
        }
        const double a = tangents_[i] / secant[i];
        const double b = tangents_[i + 1] / secant[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            tangents_[i] = tau * a * secant[i];
            tangents_[i + 1] = tau * b * secant[i];
        }
    }
}

double TabulatedFn::eval(double x) const {
    if (x <= xs_.front()) return ys_.front() + tangents_.front() * (x - xs_.front());
    if (x >= xs_.back()) return ys_.back() + tangents_.back() * (x - xs_.back());
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return ys_[i] * (2 * t3 - 3 * t2 + 1) + h * tangents_[i] * (t3 - 2 * t2 + t) +
           ys_[i + 1] * (-2 * t3 + 3 * t2) + h * tangents_[i + 1] * (t3 - t2);
}

double TabulatedFn::derivative(double x) const {
    if (x <= xs_.front()) return tangents_.front();
    if (x >= xs_.back()) return tangents_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t;
    return (ys_[i] * (6 * t2 - 6 * t) + h * tangents_[i] * (3 * t2 - 4 * t + 1) +
            ys_[i + 1] * (-6 * t2 + 6 * t) + h * tangents_[i + 1] * (3 * t2 - 2 * t)) /
           h;
}

// ---------------------------------------------------------------------------
// BasisFn
// ---------------------------------------------------------------------------

BasisFn BasisFn::monomial(int power) {
    if (power < 2)
        throw std::invalid_argument("BasisFn::monomial: power must be >= 2 "
                                    "(the linear term lives in a1)");
    return BasisFn(Kind::monomial, static_cast<double>(power));
}

BasisFn BasisFn::hinge_pos(double breakpoint) {
    if (breakpoint < 0.0)
        throw std::invalid_argument("BasisFn::hinge_pos: breakpoint must be >= 0 so phi(0) = 0");
    return BasisFn(Kind::hinge_pos, breakpoint);
}

BasisFn BasisFn::hinge_neg(double breakpoint) {
    if (breakpoint < 0.0)
        throw std::invalid_argument("BasisFn::hinge_neg: breakpoint must be >= 0 so phi(0) = 0");
    return BasisFn(Kind::hinge_neg, breakpoint);
}

BasisFn BasisFn::tabulated(std::vector<double> xs, std::vector<double> ys) {
    BasisFn fn(Kind::tabulated, 0.0);
    fn.table_ = std::make_shared<TabulatedFn>(std::move(xs), std::move(ys));
    if (std::abs(fn.table_->eval(0.0)) > 1e-12)
        throw std::invalid_argument("BasisFn::tabulated: table must vanish at 0");
    return fn;
}

double BasisFn::eval(double v) const {
    switch (kind_) {
        case Kind::monomial: {
            double acc = v * v;
            for (int i = 2; i < static_cast<int>(param_); ++i) acc *= v;
            return acc;
        }
        case Kind::hinge_pos:
            return std::max(0.0, v - param_);
        case Kind::hinge_neg:
            return std::max(0.0, -(v + param_));
        case Kind::tabulated:
            return table_->eval(v);
    }
    return 0.0;
}

double BasisFn::derivative(double v) const {
    switch (kind_) {
        case Kind::monomial: {
            const int j = static_cast<int>(param_);
            double acc = static_cast<double>(j) * v;
            for (int i = 2; i < j; ++i) acc *= v;
            return acc;
        }
        case Kind::hinge_pos:
            return v > param_ ? 1.0 : 0.0;
        case Kind::hinge_neg:
            return v < -param_ ? -1.0 : 0.0;
        case Kind::tabulated:
            return table_->derivative(v);
    }
    return 0.0;
}

std::string BasisFn::describe() const {
    switch (kind_) {
        case Kind::monomial:
            return "v^" + std::to_string(static_cast<int>(param_));
        case Kind::hinge_pos:
            return "max{0, v - " + std::to_string(param_) + "}";
        case Kind::hinge_neg:
            return "max{0, -(v + " + std::to_string(param_) + ")}";
        case Kind::tabulated:
            return "tabulated[" + std::to_string(table_->xs().size()) + "]";
    }
    return "?";
}

bool BasisFn::operator==(const BasisFn& other) const {
    if (kind_ != other.kind_ || param_ != other.param_) return false;
    if (kind_ != Kind::tabulated) return true;
    return table_->xs() == other.table_->xs() && table_->ys() == other.table_->ys();
}

// ---------------------------------------------------------------------------
// StaticNL
// ---------------------------------------------------------------------------

StaticNL::StaticNL(double a1, std::vector<Term> terms, SectorBounds declared_sector,
                   std::pair<double, double> domain_hint)
    : a1_(a1), terms_(std::move(terms)), base_sector_(declared_sector),
      domain_hint_(domain_hint) {
    if (!(domain_hint_.first < domain_hint_.second))
        throw std::invalid_argument("StaticNL: empty domain hint");
    for (const Term& t : terms_)
        if (!std::isfinite(t.coeff)) throw std::invalid_argument("StaticNL: non-finite coefficient");
}

double StaticNL::eval(double v) const {
    double acc = (a1_ + shift_) * v;
    for (const Term& t : terms_) acc += t.coeff * t.basis.eval(v);
    return acc;
}

double StaticNL::derivative(double v) const {
    double acc = a1_ + shift_;
    for (const Term& t : terms_) acc += t.coeff * t.basis.derivative(v);
    return acc;
}

StaticNL StaticNL::gain_shift(double k) const {
    StaticNL out = *this;
    out.shift_ += k;
    return out;
}

StaticNL StaticNL::nonlinear_part() const {
    StaticNL out = *this;
    out.a1_ = 0.0;
    out.shift_ = 0.0;
    out.base_sector_ = SectorBounds(base_sector_.rho1 - linear_coeff(),
                                    base_sector_.rho2 - linear_coeff());
    return out;
}

SectorBounds empirical_sector(const StaticNL& nl, std::pair<double, double> interval,
                              int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("empirical_sector: need >= 2 grid points");
    if (!(interval.first < interval.second))
        throw std::invalid_argument("empirical_sector: degenerate interval");
    const double step = (interval.second - interval.first) / (grid_points - 1);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double prev_v = interval.first;
    double prev_h = nl.eval(prev_v);
    for (int i = 1; i < grid_points; ++i) {
        const double v = interval.first + step * i;
        const double h = nl.eval(v);
        const double q = (h - prev_h) / (v - prev_v);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
        prev_v = v;
        prev_h = h;
    }
    return {lo, hi};
}

StaticNL builtin_nonlinearity(const std::string& name) {
    if (name == "fhn") {
        // h(v) = -v + v^3/3
        return StaticNL(-1.0, {{1.0 / 3.0, BasisFn::monomial(3)}}, SectorBounds(-1.0, 8.0),
                        {-3.0, 3.0});
    }
    if (name == "chua") {
        // Piecewise-linear diode, hinge representation: slopes -4 inside
        // |v| < 1 and -0.1 outside.
        return StaticNL(-4.0,
                        {{3.9, BasisFn::hinge_pos(1.0)}, {-3.9, BasisFn::hinge_neg(1.0)}},
                        SectorBounds(-4.0, -0.1), {-5.0, 5.0});
    }
    throw std::invalid_argument("builtin_nonlinearity: unknown name '" + name + "'");
}

}  // namespace lureid
