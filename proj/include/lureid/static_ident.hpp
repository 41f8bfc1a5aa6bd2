#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "lureid/excitation.hpp"
#include "lureid/lure_model.hpp"
#include "lureid/simulator.hpp"

namespace lureid {

/// Steady-state estimates from the M constant-reference experiments.
struct EquilibriumDataset {
    std::vector<double> v_ref;         ///< applied grid values
    std::vector<double> v_hat;         ///< averaged v_m per grid point
    std::vector<double> i_hat;         ///< averaged i_m per grid point
    std::vector<double> settle_drift;  ///< |mean(first half) - mean(second half)|
    int n_avg = 0;
    bool monotone = false;             ///< v_hat strictly increasing
};

/// Least-squares fit of the inverse static characteristic.
struct StaticFit {
    std::vector<double> w_hat;     ///< w1 (linear slope), then nonlinear coeffs
    std::vector<BasisFn> bases;    ///< phi_2 .. phi_J
    double residual_norm = 0.0;
    double cond_phi = 0.0;
    double k = 0.0;                ///< feedback gain used during the stage
    std::pair<double, double> fit_range{0.0, 0.0};

    /// Nonlinear terms (w_2 phi_2, ...) for the feedback-linearizing law.
    std::vector<StaticNL::Term> nonlinear_terms() const;
};

struct StaticStageOptions {
    double k = 1.5;
    std::vector<double> grid;      ///< constant reference values
    double settle_time = 50.0;     ///< discarded transient, seconds
    int n_avg = 1000;              ///< averaged samples per grid point
    double T_s = 1e-3;
    double dt_internal = 1e-3;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    int workers = 0;
    /// Average the whole record from the first sample instead of discarding
    /// the settle window (the protocol of the original experiments; its
    /// transient bias is noise-independent). Disables the settle diagnostic.
    bool full_record_average = false;
};

/// Signature for pluggable record sources (index, reference, duration).
using StaticRecordSource = std::function<SampledRecord(int, double, double)>;

/// Runs the M constant-reference experiments (in parallel) and averages the
/// post-transient window. Throws a non-settled error naming the grid point
/// when the two halves of the averaging window drift apart by more than
/// 5x the noise floor of their difference.
EquilibriumDataset run_static_stage(const LureModel& model, const StaticStageOptions& opt);

/// Same, but with externally supplied records (replay / hardware data).
EquilibriumDataset run_static_stage_from_source(const StaticRecordSource& source,
                                                const StaticStageOptions& opt);

/// Regression matrix with rows (v_hat[m], phi_2(v_hat[m]), ...). Regressors
/// use the measured v_hat, so a small errors-in-variables bias of order
/// sigma^2/N is accepted rather than corrected. Throws an ill-conditioned
/// error when cond(Phi) > 1e10.
struct Regression {
    Eigen::MatrixXd phi;
    Eigen::VectorXd target;
    double cond = 0.0;
};
Regression build_regression(const EquilibriumDataset& data, const std::vector<BasisFn>& bases,
                            bool enforce_conditioning = true);

/// QR least squares (mathematically the normal-equation solution, better
/// conditioned). Residuals are orthogonal to the column space of Phi.
StaticFit fit_static(const Regression& reg, const std::vector<BasisFn>& bases);

/// Convenience: regression + fit.
StaticFit fit_static(const EquilibriumDataset& data, const std::vector<BasisFn>& bases);

/// Fitted inverse characteristic i_inf_hat(v) = w1 v + sum w_j phi_j(v).
double i_inf_estimate(const StaticFit& fit, double v);

/// Residual norm as a function of the number of retained terms (1..J);
/// exposed for model-order exploration.
std::vector<double> residual_vs_terms(const EquilibriumDataset& data,
                                      const std::vector<BasisFn>& bases);

/// Preset bases matching the built-in models: fhn -> {v^2, v^3},
/// chua -> {hinge_pos(1), hinge_neg(1)}.
std::vector<BasisFn> preset_bases(const std::string& model_name);

}  // namespace lureid
