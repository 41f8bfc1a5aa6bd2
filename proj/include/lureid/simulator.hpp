#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lureid/lure_model.hpp"
#include "lureid/signal.hpp"
#include "lureid/state_space.hpp"

namespace lureid {

/// How the feedback law is realized. `sampled_zoh` is the realistic setup:
/// the controller reads v_m at ticks and its output is held constant over
/// each sample period. `analog` evaluates the law continuously inside the
/// integrand (the idealized analog-circuit implementation); it requires
/// sigma = 0 since noise is defined at ticks only.
enum class LoopMode { sampled_zoh, analog };

struct SimConfig {
    double dt_internal = 1e-3;  ///< integration step cap, <= T_s
    double T_s = 1e-3;          ///< controller/measurement sample period
    double duration = 1.0;      ///< total time, a multiple of T_s
    double sigma = 0.0;         ///< std dev of e_v and e_i
    std::uint64_t seed = 0;
    bool record_truth = true;
    LoopMode loop_mode = LoopMode::sampled_zoh;
    std::vector<double> x0;     ///< initial state; empty = zeros
    double rel_tol = 1e-6;
    double abs_tol = 1e-6;

    std::int64_t tick_count() const;
    void validate() const;
};

/// Output feedback law. linear_fb: i = k (v_r - v_m). feedlin additionally
/// cancels identified nonlinear terms: i = k (v_r - v_m) + sum_j w_j phi_j(v_m).
struct Controller {
    enum class Kind { linear_fb, feedlin };
    Kind kind = Kind::linear_fb;
    double k = 0.0;
    std::vector<StaticNL::Term> cancel_terms;  ///< feedlin only
    RefSignal v_ref = RefSignal::constant(0.0);

    static Controller linear(double k, RefSignal v_ref);
    static Controller feedback_linearizing(double k, std::vector<StaticNL::Term> terms,
                                           RefSignal v_ref);

    double output(double v_measured, double v_reference) const;
};

/// Uniformly sampled multi-channel record (one row per controller tick).
struct SampledRecord {
    double T_s = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> v_r;
    std::vector<double> v_m;
    std::vector<double> i_m;
    std::vector<double> v;  ///< noiseless output; empty unless record_truth
    std::vector<double> i;  ///< applied input; empty unless record_truth
    std::vector<std::string> warnings;
    std::string config_summary;

    std::size_t size() const { return v_m.size(); }
    double time_at(std::size_t n) const { return static_cast<double>(n) * T_s; }
};

/// Closed-loop simulation of the realistic setup: plant (controllable
/// canonical realization of model.g driven by i - h(v)), sampled noise
/// e_v, e_i injected at ticks, noise fed back through the controller.
SampledRecord simulate(const LureModel& model, const Controller& ctrl, const SimConfig& cfg);

/// Open-loop run with a prescribed input current signal (ZOH-sampled in
/// sampled mode, continuous in analog mode). v_r channel records zeros.
SampledRecord simulate_autonomous(const LureModel& model, const RefSignal& i_signal,
                                  const SimConfig& cfg);

/// State trajectory of an explicit realization in negative feedback with a
/// static map: x' = A x + B (i - h(C x)). Used for attractor reconstruction.
struct StateTrajectory {
    double T_s = 0.0;
    std::vector<std::vector<double>> states;  ///< states[k][n]: k-th coordinate
    std::vector<double> v;

    std::size_t size() const { return v.size(); }
};

StateTrajectory simulate_states(const StateSpace& ss, const StaticNL& h,
                                const RefSignal& i_signal, const SimConfig& cfg);

}  // namespace lureid
