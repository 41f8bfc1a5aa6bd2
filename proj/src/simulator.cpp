#include "lureid/simulator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lureid/integrator.hpp"
#include "lureid/rng.hpp"

namespace lureid {

namespace {

bool near_integer_multiple(double whole, double part) {
    const double ratio = whole / part;
    return std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio);
}

struct NoiseTaps {
    CounterRng rng_v;
    CounterRng rng_i;
    double sigma;

    NoiseTaps(std::uint64_t seed, double sigma_in)
        : rng_v(seed, static_cast<std::uint64_t>(NoiseStream::voltage)),
          rng_i(seed, static_cast<std::uint64_t>(NoiseStream::current)),
          sigma(sigma_in) {}

    double e_v(std::int64_t n) const {
        return sigma == 0.0 ? 0.0 : sigma * rng_v.gaussian_at(static_cast<std::uint64_t>(n));
    }
    double e_i(std::int64_t n) const {
        return sigma == 0.0 ? 0.0 : sigma * rng_i.gaussian_at(static_cast<std::uint64_t>(n));
    }
};

Eigen::VectorXd initial_state(const SimConfig& cfg, int order) {
    if (cfg.x0.empty()) return Eigen::VectorXd::Zero(order);
    if (static_cast<int>(cfg.x0.size()) != order)
        throw std::invalid_argument("SimConfig: x0 size does not match plant order");
    Eigen::VectorXd x(order);
    for (int k = 0; k < order; ++k) x(k) = cfg.x0[static_cast<std::size_t>(k)];
    return x;
}

std::string summarize(const SimConfig& cfg, const std::string& plant, const std::string& input) {
    std::ostringstream os;
    os << "{\"plant\":\"" << plant << "\",\"input\":\"" << input << "\",\"T_s\":" << cfg.T_s
       << ",\"dt_internal\":" << cfg.dt_internal << ",\"duration\":" << cfg.duration
       << ",\"sigma\":" << cfg.sigma << ",\"seed\":" << cfg.seed << ",\"loop\":\""
       << (cfg.loop_mode == LoopMode::sampled_zoh ? "zoh" : "analog") << "\"}";
    return os.str();
}

// Shared engine: runs the tick loop for a plant realization with nonlinear
// internal feedback h and an input law. The tick callback supplies the
// held input value in sampled mode; in analog mode `law` is evaluated
// inside the integrand.
template <typename TickInput, typename AnalogLaw>
void run_loop(const StateSpace& ss, const StaticNL& h, const SimConfig& cfg,
              TickInput&& tick_input, AnalogLaw&& analog_law,
              std::vector<std::vector<double>>* state_log) {
    const std::int64_t ticks = cfg.tick_count();
    Eigen::VectorXd x = initial_state(cfg, ss.order());

    IntegratorOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.max_step = cfg.dt_internal;

    const bool analog = cfg.loop_mode == LoopMode::analog;

    for (std::int64_t n = 0; n < ticks; ++n) {
        const double t = static_cast<double>(n) * cfg.T_s;
        const double v = (ss.C * x)(0, 0);
        if (state_log)
            for (int kk = 0; kk < ss.order(); ++kk)
                (*state_log)[static_cast<std::size_t>(kk)].push_back(x(kk));
        const double i_held = tick_input(n, v);

        if (analog) {
            auto f = [&](double tt, const Eigen::VectorXd& xx, Eigen::VectorXd& dx) {
                const double vv = (ss.C * xx)(0, 0);
                dx = ss.A * xx + ss.B * (analog_law(tt, vv) - h.eval(vv));
            };
            integrate_dopri45(f, x, t, t + cfg.T_s, opt);
        } else {
            auto f = [&](double, const Eigen::VectorXd& xx, Eigen::VectorXd& dx) {
                const double vv = (ss.C * xx)(0, 0);
                dx = ss.A * xx + ss.B * (i_held - h.eval(vv));
            };
            integrate_dopri45(f, x, t, t + cfg.T_s, opt);
        }
    }
}

}  // namespace

std::int64_t SimConfig::tick_count() const {
    return static_cast<std::int64_t>(std::llround(duration / T_s));
}

void SimConfig::validate() const {
    if (!(T_s > 0.0) || !(dt_internal > 0.0) || !(duration > 0.0))
        throw std::invalid_argument("SimConfig: periods and duration must be positive");
    if (dt_internal > T_s * (1.0 + 1e-12))
        throw std::invalid_argument("SimConfig: dt_internal must not exceed T_s");
    if (!near_integer_multiple(T_s, dt_internal))
        throw std::invalid_argument("SimConfig: T_s must be an integer multiple of dt_internal");
    if (!near_integer_multiple(duration, T_s))
        throw std::invalid_argument("SimConfig: duration must be a multiple of T_s");
    if (sigma < 0.0) throw std::invalid_argument("SimConfig: negative sigma");
    if (loop_mode == LoopMode::analog && sigma != 0.0)
        throw std::invalid_argument("SimConfig: analog loop mode requires sigma = 0");
}

Controller Controller::linear(double k, RefSignal v_ref) {
    Controller c;
    c.kind = Kind::linear_fb;
    c.k = k;
    c.v_ref = std::move(v_ref);
    return c;
}

Controller Controller::feedback_linearizing(double k, std::vector<StaticNL::Term> terms,
                                            RefSignal v_ref) {
    for (const auto& t : terms)
        if (!std::isfinite(t.coeff))
            throw std::invalid_argument("Controller: non-finite cancellation coefficient");
    Controller c;
    c.kind = Kind::feedlin;
    c.k = k;
    c.cancel_terms = std::move(terms);
    c.v_ref = std::move(v_ref);
    return c;
}

double Controller::output(double v_measured, double v_reference) const {
    double i = k * (v_reference - v_measured);
    if (kind == Kind::feedlin)
        for (const auto& t : cancel_terms) i += t.coeff * t.basis.eval(v_measured);
    return i;
}

SampledRecord simulate(const LureModel& model, const Controller& ctrl, const SimConfig& cfg) {
    cfg.validate();
    const StateSpace ss = to_controllable_canonical(model.g);
    const std::int64_t ticks = cfg.tick_count();
    NoiseTaps noise(cfg.seed, cfg.sigma);

    SampledRecord rec;
    rec.T_s = cfg.T_s;
    rec.seed = cfg.seed;
    rec.config_summary = summarize(cfg, model.name.empty() ? "custom" : model.name,
                                   ctrl.v_ref.description());
    rec.v_r.reserve(static_cast<std::size_t>(ticks));
    rec.v_m.reserve(static_cast<std::size_t>(ticks));
    rec.i_m.reserve(static_cast<std::size_t>(ticks));
    if (cfg.record_truth) {
        rec.v.reserve(static_cast<std::size_t>(ticks));
        rec.i.reserve(static_cast<std::size_t>(ticks));
    }

    const double sector_low = model.h.declared_sector().rho1;
    if (ctrl.k + sector_low <= 0.0)
        rec.warnings.push_back("k + rho1 <= 0: equilibria may be non-unique or unstable");

    auto tick_input = [&](std::int64_t n, double v) {
        const double v_ref = ctrl.v_ref.at_tick(n, cfg.T_s);
        const double v_meas = v + noise.e_v(n);
        const double i = ctrl.output(v_meas, v_ref);
        rec.v_r.push_back(v_ref);
        rec.v_m.push_back(v_meas);
        rec.i_m.push_back(i + noise.e_i(n));
        if (cfg.record_truth) {
            rec.v.push_back(v);
            rec.i.push_back(i);
        }
        return i;
    };
    auto analog_law = [&](double t, double v) {
        return ctrl.output(v, ctrl.v_ref.at_time(t));
    };

    try {
        run_loop(ss, model.h, cfg, tick_input, analog_law, nullptr);
    } catch (const std::runtime_error& err) {
        throw std::runtime_error(std::string("simulate: ") + err.what());
    }
    return rec;
}

SampledRecord simulate_autonomous(const LureModel& model, const RefSignal& i_signal,
                                  const SimConfig& cfg) {
    cfg.validate();
    const StateSpace ss = to_controllable_canonical(model.g);
    NoiseTaps noise(cfg.seed, cfg.sigma);

    SampledRecord rec;
    rec.T_s = cfg.T_s;
    rec.seed = cfg.seed;
    rec.config_summary = summarize(cfg, model.name.empty() ? "custom" : model.name,
                                   "open-loop " + i_signal.description());
    auto tick_input = [&](std::int64_t n, double v) {
        const double i = i_signal.at_tick(n, cfg.T_s);
        rec.v_r.push_back(0.0);
        rec.v_m.push_back(v + noise.e_v(n));
        rec.i_m.push_back(i + noise.e_i(n));
        if (cfg.record_truth) {
            rec.v.push_back(v);
            rec.i.push_back(i);
        }
        return i;
    };
    auto analog_law = [&](double t, double) { return i_signal.at_time(t); };

    try {
        run_loop(ss, model.h, cfg, tick_input, analog_law, nullptr);
    } catch (const std::runtime_error& err) {
        throw std::runtime_error(std::string("simulate_autonomous: ") + err.what());
    }
    return rec;
}

StateTrajectory simulate_states(const StateSpace& ss, const StaticNL& h,
                                const RefSignal& i_signal, const SimConfig& cfg) {
    cfg.validate();
    StateTrajectory traj;
    traj.T_s = cfg.T_s;
    traj.states.assign(static_cast<std::size_t>(ss.order()), {});
    auto tick_input = [&](std::int64_t n, double v) {
        traj.v.push_back(v);
        return i_signal.at_tick(n, cfg.T_s);
    };
    auto analog_law = [&](double t, double) { return i_signal.at_time(t); };
    run_loop(ss, h, cfg, tick_input, analog_law, &traj.states);
    return traj;
}

}  // namespace lureid
