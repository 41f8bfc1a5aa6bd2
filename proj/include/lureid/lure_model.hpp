#pragma once

#include <string>

#include "lureid/rational_tf.hpp"
#include "lureid/static_nl.hpp"

namespace lureid {

/// Negative feedback interconnection of an LTI block g and a static map h:
/// the plant integrates x' = Ax + B(i - h(v)), v = Cx.
struct LureModel {
    RationalTF g;
    StaticNL h;
    std::string name;  ///< empty for ad-hoc models
};

/// Built-in ground-truth circuits "fhn" and "chua".
LureModel builtin_model(const std::string& name);

/// Model-class membership: g Hurwitz, Re[G(jw)] >= 0, G(0) > 0, relative
/// degree 1. Throws std::runtime_error describing the first violation.
void validate_model_class(const LureModel& model);

/// Inverse static characteristic i_inf(v) = v/G(0) + h(v): the constant
/// input sustaining an equilibrium at output v.
double i_infinity(const LureModel& model, double v);

/// Unique solution v of v/G(0) + h(v) + k v = k v_ref (monotone for
/// k + rho1 > 0); bracketing bisection plus Newton polish, |residual| < tol.
double solve_equilibrium(const LureModel& model, double k, double v_ref, double tol = 1e-12);

/// Closed-loop transfer function from k*v_r-equivalent reference to v under
/// the feedback i = k(v_r - v) with the linear term a1 lumped into the loop:
/// G_k = k N / (D + (a1 + k) N). Throws when the result is not Hurwitz.
RationalTF closed_loop_tf(const RationalTF& g, double a1, double k);

/// G_a = G / (1 + a1 G): the LTI block with the linear part of h absorbed.
RationalTF absorb_linear_term(const RationalTF& g, double a1);

}  // namespace lureid
