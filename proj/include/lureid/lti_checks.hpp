#pragma once

#include <vector>

#include "lureid/rational_tf.hpp"
#include "lureid/sector_bounds.hpp"

namespace lureid {

struct PositiveRealReport {
    bool ok = false;
    double min_re = 0.0;
    double omega_at_min = 0.0;
    double dc_gain = 0.0;
};

struct CircleReport {
    bool ok = false;
    double worst_margin = 0.0;  ///< min over omega of r - |G(jw) - c|
    double omega_at_worst = 0.0;
    double center = 0.0;
    double radius = 0.0;
};

/// Default grid for the frequency-domain checks: 2000 log-spaced points on
/// [1e-3, 1e4] rad/s.
std::vector<double> default_omega_grid();

/// Re[G(jw)] >= 0 over the grid (local minima refined by golden-section
/// search) and G(0) > 0. Throws when tf is not Hurwitz.
PositiveRealReport check_positive_real(const RationalTF& tf,
                                       const std::vector<double>& omega_grid = default_omega_grid());

/// Nyquist locus of G inside the disk of center -(1/rho2 + 1/rho1)/2 and
/// radius (1/rho2 - 1/rho1)/2. Requires rho1 < 0 < rho2 and tf Hurwitz.
CircleReport check_circle_condition(const RationalTF& tf, const SectorBounds& sector,
                                    const std::vector<double>& omega_grid = default_omega_grid());

/// ||g||_1: integral of |impulse response|, trapezoidal at step dt over an
/// adaptively extended horizon (tail bound below 1e-6 of the running total).
/// `horizon` and `dt` are hints; pass 0 for automatic choices.
double impulse_l1_norm(const RationalTF& tf, double horizon = 0.0, double dt = 0.0);

}  // namespace lureid
