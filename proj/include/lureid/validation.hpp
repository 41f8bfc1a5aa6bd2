#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lureid/signal.hpp"
#include "lureid/simulator.hpp"

namespace lureid {

/// Goodness-of-fit score 1 - ||y_ref - y_model|| / ||y_ref - mean(y_ref)||;
/// 1 is perfect, <= 1 always. Throws on a constant reference.
double nrmse(std::span<const double> y_ref, std::span<const double> y_model);

/// Window-operator memory probe: eps(eta) is the worst output deviation at
/// the probe times between the full input and the input zeroed outside
/// [t - eta, t]. Verdict is "violated" when eps never falls below epsilon.
struct MemoryTestResult {
    std::vector<double> eta_values;
    std::vector<double> eps_values;
    double epsilon = 0.0;
    bool violated = false;
};

/// Deterministic runner: maps an input signal to the sampled output (period
/// T_s), simulated at least up to t_end.
using SystemRunner = std::function<std::vector<double>(const RefSignal&, double t_end)>;

MemoryTestResult window_memory_test(const SystemRunner& runner, const RefSignal& input,
                                    const std::vector<double>& eta_list,
                                    const std::vector<double>& probe_times, double T_s,
                                    double epsilon);

/// Threshold-crossing spike detection and nearest-time event matching.
struct SpikeReport {
    std::vector<double> ref_times;
    std::vector<double> model_times;
    int matched = 0;
    int missed = 0;  ///< reference spikes with no model partner
    int extra = 0;   ///< model spikes with no reference partner
};

std::vector<double> detect_spikes(std::span<const double> y, double T_s, double threshold,
                                  double min_separation);

SpikeReport spike_match(std::span<const double> y_ref, std::span<const double> y_model,
                        double T_s, double threshold, double min_separation);

/// Two-lobe attractor occupancy test on the first modal coordinate:
/// bounded, >= 5% of samples beyond +/- lobe_threshold on each side, and
/// >= 10 lobe-to-lobe transitions.
struct DoubleScrollReport {
    bool ok = false;
    bool bounded = false;
    double fraction_positive = 0.0;
    double fraction_negative = 0.0;
    int transitions = 0;
    double max_state_norm = 0.0;
};

DoubleScrollReport double_scroll_check(const StateTrajectory& traj, double lobe_threshold);

/// Largest normalized autocorrelation of (y - mean) over lags in
/// [lag_min, lag_max]; near 1 indicates periodicity at some lag.
double max_autocorrelation(std::span<const double> y, double T_s, double lag_min,
                           double lag_max);

}  // namespace lureid
