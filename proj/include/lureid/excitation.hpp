#pragma once

#include <cstdint>
#include <mutex>
#include <vector>

#include "lureid/signal.hpp"

namespace lureid {

/// FFTW's planner is process-global and not thread-safe; every plan
/// create/destroy in this library takes this lock.
std::mutex& fftw_plan_mutex();

/// Random-phase multisine specification. N = T/T_s and N_f = f_max*T must be
/// integers with N_f < N/2; line amplitudes are flat (u_0 = 0, u_l = u_bar).
struct MultisineSpec {
    double T = 20.0;      ///< period, seconds
    double T_s = 1e-3;    ///< sample period, seconds
    double f_max = 20.0;  ///< highest excited frequency, Hz
    double u_bar = 0.1;   ///< per-line amplitude
    std::uint64_t seed = 0;
    int periods = 2;

    std::int64_t samples_per_period() const;
    std::int64_t harmonic_count() const;  ///< N_f
    void validate() const;
};

/// Per-line amplitude that yields the requested RMS (Parseval:
/// rms = u_bar * sqrt(N_f / 2)).
double u_bar_for_rms(double rms, std::int64_t n_harmonics);

/// One realization of a random-phase multisine.
struct Multisine {
    MultisineSpec spec;
    std::vector<double> phases;          ///< theta_l, l = 1..N_f
    std::vector<double> period_samples;  ///< one period, length N

    /// Continuous-time evaluation (direct sine sum; O(N_f) per call).
    double value(double t) const;

    /// periods * N samples (tiled copies of the synthesized period).
    std::vector<double> samples() const;

    RefSignal as_sampled_ref() const;
    RefSignal as_analytic_ref() const;
};

/// Phases drawn uniformly on [0, 2pi) from the seeded generator; the period
/// is synthesized by inverse FFT (exact bin support).
Multisine make_multisine(const MultisineSpec& spec);

/// Test hook: prescribed phases (size must equal N_f).
Multisine make_multisine_with_phases(const MultisineSpec& spec, std::vector<double> phases);

/// Grid of constant reference values for the static stage.
struct GridSpec {
    double v_min = -1.0;
    double v_max = 1.0;
    int points = 15;
    enum class Spacing { uniform, chebyshev } spacing = Spacing::uniform;
};

std::vector<double> constant_grid(const GridSpec& spec);

}  // namespace lureid
