#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "lureid/excitation.hpp"
#include "lureid/lure_model.hpp"
#include "lureid/simulator.hpp"
#include "lureid/static_ident.hpp"

namespace lureid {

/// Nonparametric frequency response at the excited multisine bins,
/// averaged over realizations.
struct FrfEstimate {
    std::vector<double> freq_hz;
    std::vector<std::complex<double>> response;
    std::vector<double> variance;  ///< per-bin sample variance across realizations
    int realizations = 0;
};

/// Output of the two-stage identification.
struct IdentifiedModel {
    RationalTF g_a_hat;
    StaticNL h_hat;  ///< nonlinear terms only (a1 is absorbed into g_a_hat)
    double k = 0.0;
    RationalTF g_k_hat;
    double fit_residual = 0.0;
    std::vector<std::complex<double>> g_k_poles;
    std::vector<std::complex<double>> g_a_poles;
};

struct DynamicStageOptions {
    double k = 1.5;
    MultisineSpec multisine;  ///< per-realization spec; u_bar must be set
    int realizations = 5;
    double sigma = 0.0;
    double dt_internal = 1e-3;
    std::uint64_t seed = 0;
    int workers = 0;
    LoopMode loop_mode = LoopMode::sampled_zoh;
};

using DynamicRecordSource = std::function<SampledRecord(int realization, const Multisine&)>;

/// R independent-seed closed-loop experiments under the feedback-linearizing
/// law k (v_r - v_m) + sum_j w_j phi_j(v_m), each driven by a fresh
/// random-phase multisine. Throws naming the realization on divergence.
std::vector<SampledRecord> run_dynamic_stage(const LureModel& model,
                                             const std::vector<StaticNL::Term>& cancel_terms,
                                             const DynamicStageOptions& opt);

std::vector<SampledRecord> run_dynamic_stage_from_source(const DynamicRecordSource& source,
                                                         const DynamicStageOptions& opt);

/// Discards all but the last period, DFTs v_m and v_r, and averages the
/// per-realization ratios V/V_r at the excited bins.
FrfEstimate estimate_frf(const std::vector<SampledRecord>& records, const MultisineSpec& spec);

struct RationalFitDiagnostics {
    int iterations = 0;
    double weighted_residual = 0.0;
    bool poles_reflected = false;
};

/// Weighted Sanathanan-Koerner iteration (<= 50 rounds, stop on coefficient
/// change < 1e-10), per-bin weights 1/max(variance, floor). Unstable poles
/// are reflected across the imaginary axis only when that degrades the
/// residual by < 1%, otherwise the fit errors out.
RationalTF fit_rational(const FrfEstimate& frf, int n_poles, int n_zeros,
                        RationalFitDiagnostics* diag = nullptr);

/// G_a_hat = (1/k) G_k_hat / (1 - G_k_hat), with near-cancelling leading
/// coefficients trimmed at relative tolerance 1e-9.
RationalTF recover_ga(const RationalTF& g_k_hat, double k);

/// Pairs the recovered LTI block with the nonlinear part of the static fit.
IdentifiedModel assemble_model(const RationalTF& g_a_hat, const StaticFit& static_fit,
                               double k, const RationalTF& g_k_hat = RationalTF::zero());

/// The identified Lure interconnection as a simulatable model.
LureModel as_lure_model(const IdentifiedModel& model, const std::string& name = "identified");

}  // namespace lureid
