#include "lureid/lti_checks.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "lureid/state_space.hpp"

namespace lureid {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section minimization of f over [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double* arg_out) {
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-9 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    const double x = f1 < f2 ? x1 : x2;
    if (arg_out) *arg_out = x;
    return std::min(f1, f2);
}

// Scans f over the grid and refines every interior local minimum.
void refined_minimum(const std::function<double(double)>& f,
                     const std::vector<double>& grid, double* min_out, double* arg_out) {
    if (grid.size() < 2) throw std::invalid_argument("frequency grid too small");
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
    double best = vals[0];
    double best_w = grid[0];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (vals[i] < best) {
            best = vals[i];
            best_w = grid[i];
        }
    }
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
            double arg = grid[i];
            const double v = golden_min(f, grid[i - 1], grid[i + 1], &arg);
            if (v < best) {
                best = v;
                best_w = arg;
            }
        }
    }
    *min_out = best;
    *arg_out = best_w;
}

}  // namespace

std::vector<double> default_omega_grid() {
    constexpr int kPoints = 2000;
    std::vector<double> grid(kPoints);
    const double lo = std::log10(1e-3), hi = std::log10(1e4);
    for (int i = 0; i < kPoints; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::pow(10.0, lo + (hi - lo) * i / double(kPoints - 1));
    return grid;
}

PositiveRealReport check_positive_real(const RationalTF& tf,
                                       const std::vector<double>& omega_grid) {
    if (!is_hurwitz(tf))
        throw std::runtime_error("check_positive_real: transfer function is not Hurwitz");
    auto re_g = [&tf](double w) { return eval_freq(tf, w).real(); };
    PositiveRealReport rep;
    refined_minimum(re_g, omega_grid, &rep.min_re, &rep.omega_at_min);
    rep.dc_gain = tf.gain_at_zero();
    if (rep.dc_gain < rep.min_re) {
        rep.min_re = rep.dc_gain;
        rep.omega_at_min = 0.0;
    }
    rep.ok = rep.min_re >= -1e-9 && rep.dc_gain > 0.0;
    return rep;
}

CircleReport check_circle_condition(const RationalTF& tf, const SectorBounds& sector,
                                    const std::vector<double>& omega_grid) {
    if (!(sector.rho1 < 0.0 && 0.0 < sector.rho2))
        throw std::invalid_argument(
            "check_circle_condition: requires rho1 < 0 < rho2 "
            "(use check_positive_real when 0 <= rho1)");
    if (!is_hurwitz(tf))
        throw std::runtime_error("check_circle_condition: transfer function is not Hurwitz");
    CircleReport rep;
    rep.center = -(1.0 / sector.rho2 + 1.0 / sector.rho1) / 2.0;
    rep.radius = (1.0 / sector.rho2 - 1.0 / sector.rho1) / 2.0;
    auto margin = [&](double w) {
        return rep.radius - std::abs(eval_freq(tf, w) - std::complex<double>(rep.center, 0.0));
    };
    refined_minimum(margin, omega_grid, &rep.worst_margin, &rep.omega_at_worst);
    const double m0 = margin(0.0);
    if (m0 < rep.worst_margin) {
        rep.worst_margin = m0;
        rep.omega_at_worst = 0.0;
    }
    rep.ok = rep.worst_margin > 0.0;
    return rep;
}

double impulse_l1_norm(const RationalTF& tf, double horizon, double dt) {
    if (!tf.is_strictly_proper())
        throw std::invalid_argument("impulse_l1_norm: requires a strictly proper tf");
    if (tf.is_zero()) return 0.0;
    if (!is_hurwitz(tf))
        throw std::runtime_error("impulse_l1_norm: impulse response diverges (not Hurwitz)");

    const double alpha = slowest_decay_rate(tf);
    const StateSpace ss = to_controllable_canonical(tf);
    if (dt <= 0.0) dt = std::min(1e-3, 0.01 / alpha);

    // Exact state propagation over one dt; only the trapezoid rule on |y|
    // contributes error.
    const Eigen::MatrixXd step = (ss.A * dt).exp();
    Eigen::VectorXd x = ss.B;
    double total = 0.0;
    double prev = std::abs((ss.C * x)(0, 0));
    double t = 0.0;
    const double t_floor = horizon > 0.0 ? horizon : 10.0 / alpha;
    const double t_cap = std::max(t_floor, 200.0 / alpha);
    while (t < t_cap) {
        const double chunk_end = t + 5.0 / alpha;
        double chunk = 0.0;
        while (t < chunk_end) {
            x = step * x;
            t += dt;
            const double cur = std::abs((ss.C * x)(0, 0));
            chunk += 0.5 * (prev + cur) * dt;
            prev = cur;
        }
        total += chunk;
        // Tail bound from the slowest mode once past the horizon hint.
        const double tail = (std::abs((ss.C * x)(0, 0)) + ss.C.cwiseAbs().sum() * x.norm()) / alpha;
        if (t >= t_floor && tail < 1e-6 * total && chunk < 1e-6 * total) break;
    }
    return total;
}

}  // namespace lureid
