#pragma once

#include <Eigen/Dense>

#include "lureid/rational_tf.hpp"

namespace lureid {

/// Single-input single-output state-space realization
///   x' = A x + B u,  y = C x + D u.
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    double D = 0.0;

    int order() const { return static_cast<int>(A.rows()); }
};

/// Controllable (phase-variable) canonical realization. Requires a proper tf.
StateSpace to_controllable_canonical(const RationalTF& tf);

/// Modal canonical realization: 1x1 blocks for real poles, 2x2 blocks
/// [[sigma, wd], [-wd, sigma]] for complex pairs, blocks ordered by
/// ascending real part then imaginary magnitude. Requires distinct poles
/// (separation > 1e-8); repeated poles raise std::runtime_error.
StateSpace to_modal_canonical(const RationalTF& tf);

/// Exact symbolic conversion back to a transfer function
/// (Faddeev-LeVerrier resolvent expansion).
RationalTF transfer_function(const StateSpace& ss);

/// Frequency response C (jw I - A)^-1 B + D.
std::complex<double> eval_freq(const StateSpace& ss, double omega);

}  // namespace lureid
