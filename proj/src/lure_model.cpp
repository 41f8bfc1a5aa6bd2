#include "lureid/lure_model.hpp"

#include <cmath>
#include <stdexcept>

#include "lureid/lti_checks.hpp"

namespace lureid {

LureModel builtin_model(const std::string& name) {
    if (name == "fhn") {
        return {RationalTF({20.0, 15.0}, {1.0, 0.75, 20.0}), builtin_nonlinearity("fhn"), "fhn"};
    }
    if (name == "chua") {
        // c1 = 0.1, c2 = 2, l = 1/7, r = 0.7, denominator normalized monic.
        const double c1 = 0.1, c2 = 2.0, l = 1.0 / 7.0, r = 0.7;
        return {RationalTF({l * c2, l * r, 1.0},
                           {l * c1 * c2, l * r * (c1 + c2), c1, r}),
                builtin_nonlinearity("chua"), "chua"};
    }
    throw std::invalid_argument("builtin_model: unknown name '" + name + "'");
}

void validate_model_class(const LureModel& model) {
    if (!is_hurwitz(model.g))
        throw std::runtime_error("model class: G(s) is not Hurwitz");
    if (model.g.relative_degree() != 1)
        throw std::runtime_error("model class: deg D - deg N must equal 1");
    if (!(model.g.gain_at_zero() > 0.0))
        throw std::runtime_error("model class: G(0) must be positive");
    const auto rep = check_positive_real(model.g);
    if (!rep.ok)
        throw std::runtime_error("model class: Re[G(jw)] < 0 near omega=" +
                                 std::to_string(rep.omega_at_min));
    if (std::abs(model.h.eval(0.0)) > 1e-12)
        throw std::runtime_error("model class: h(0) must be 0");
}

double i_infinity(const LureModel& model, double v) {
    return v / model.g.gain_at_zero() + model.h.eval(v);
}

double solve_equilibrium(const LureModel& model, double k, double v_ref, double tol) {
    const double inv_g0 = 1.0 / model.g.gain_at_zero();
    auto residual = [&](double v) { return inv_g0 * v + model.h.eval(v) + k * (v - v_ref); };

    // Expand a bracket geometrically around v_ref.
    double span = std::max(1.0, std::abs(v_ref));
    double lo = v_ref - span, hi = v_ref + span;
    int expansions = 0;
    while (residual(lo) > 0.0 || residual(hi) < 0.0) {
        span *= 2.0;
        lo = v_ref - span;
        hi = v_ref + span;
        if (++expansions > 60)
            throw std::runtime_error(
                "solve_equilibrium: bracket expansion failed (is k + rho1 > 0?)");
    }

    // Bisection to a coarse bracket, then safeguarded Newton.
    for (int i = 0; i < 80 && (hi - lo) > 1e-3 * std::max(1.0, std::abs(v_ref)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    double v = 0.5 * (lo + hi);
    for (int i = 0; i < 100; ++i) {
        const double r = residual(v);
        if (std::abs(r) < tol) return v;
        (r < 0.0 ? lo : hi) = v;
        const double dr = inv_g0 + model.h.derivative(v) + k;
        double next = dr > 0.0 ? v - r / dr : v;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        v = next;
    }
    if (std::abs(residual(v)) < 100.0 * tol) return v;
    throw std::runtime_error("solve_equilibrium: did not converge");
}

RationalTF closed_loop_tf(const RationalTF& g, double a1, double k) {
    if (k == 0.0) return RationalTF::zero();
    const std::vector<double> num = poly::scale(g.num(), k);
    const std::vector<double> den = poly::add(g.den(), poly::scale(g.num(), a1 + k));
    RationalTF gk(num, den);
    if (!is_hurwitz(gk))
        throw std::runtime_error("closed_loop_tf: closed loop unstable for k=" +
                                 std::to_string(k));
    return gk;
}

RationalTF absorb_linear_term(const RationalTF& g, double a1) {
    return RationalTF(g.num(), poly::add(g.den(), poly::scale(g.num(), a1)));
}

}  // namespace lureid
