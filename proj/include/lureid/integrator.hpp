#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lureid {

struct IntegratorOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-6;
    double max_step = 1e-3;
    double state_bound = 1e6;  ///< infinity-norm divergence guard
};

/// Embedded Dormand-Prince 5(4) pair with PI-free step control and FSAL.
/// Advances the state in place from t0 to t1 (exact arrival at t1).
/// Deriv signature: f(double t, const VectorXd& x, VectorXd& dxdt).
template <typename Deriv>
void integrate_dopri45(Deriv&& f, Eigen::VectorXd& x, double t0, double t1,
                       const IntegratorOptions& opt) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t1 <= t0) return;
    const auto n = x.size();
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), xnew(n);

    double t = t0;
    double h = opt.max_step;
    f(t, x, k1);
    bool k1_fresh = true;

    // Arrival tolerance absorbs the roundoff left by accumulated steps.
    const double t_eps = 1e-12 * std::max(1.0, std::abs(t1));
    int rejects_in_row = 0;
    while (t1 - t > t_eps) {
        h = std::min(h, t1 - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw std::runtime_error("integrate_dopri45: step underflow at t=" + std::to_string(t));
        if (!k1_fresh) {
            f(t, x, k1);
            k1_fresh = true;
        }

        tmp = x + h * (a21 * k1);
        f(t + c2 * h, tmp, k2);
        tmp = x + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, tmp, k3);
        tmp = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, tmp, k4);
        tmp = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, tmp, k5);
        tmp = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, tmp, k6);
        xnew = x + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + h, xnew, k7);

        double err_sq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double e = h * (e1 * k1(i) + e3 * k3(i) + e4 * k4(i) + e5 * k5(i) +
                                  e6 * k6(i) + e7 * k7(i));
            const double scale =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(x(i)), std::abs(xnew(i)));
            err_sq += (e / scale) * (e / scale);
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));

        if (err <= 1.0 || h <= 1e-12) {
            t += h;
            x.swap(xnew);
            k1.swap(k7);  // FSAL
            k1_fresh = true;
            rejects_in_row = 0;
            if (!x.allFinite())
                throw std::runtime_error("integrate_dopri45: NaN state at t=" + std::to_string(t));
            if (x.cwiseAbs().maxCoeff() > opt.state_bound)
                throw std::runtime_error("integrate_dopri45: state norm exceeded " +
                                         std::to_string(opt.state_bound) + " at t=" +
                                         std::to_string(t));
        } else {
            k1_fresh = true;  // k1 still matches (t, x)
            if (++rejects_in_row > 200)
                throw std::runtime_error("integrate_dopri45: repeated step rejection at t=" +
                                         std::to_string(t));
        }
        const double factor =
            err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0) : 10.0;
        h = std::min(factor * h, opt.max_step);
    }
}

}  // namespace lureid
