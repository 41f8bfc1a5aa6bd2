#include "lureid/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lureid {

double nrmse(std::span<const double> y_ref, std::span<const double> y_model) {
    if (y_ref.size() != y_model.size() || y_ref.empty())
        throw std::invalid_argument("nrmse: signals must be nonempty and of equal length");
    double mean = 0.0;
    for (double y : y_ref) mean += y;
    mean /= static_cast<double>(y_ref.size());
    double err = 0.0, dev = 0.0;
    for (std::size_t n = 0; n < y_ref.size(); ++n) {
        err += (y_ref[n] - y_model[n]) * (y_ref[n] - y_model[n]);
        dev += (y_ref[n] - mean) * (y_ref[n] - mean);
    }
    if (dev == 0.0) throw std::invalid_argument("nrmse: constant reference signal");
    return 1.0 - std::sqrt(err) / std::sqrt(dev);
}

MemoryTestResult window_memory_test(const SystemRunner& runner, const RefSignal& input,
                                    const std::vector<double>& eta_list,
                                    const std::vector<double>& probe_times, double T_s,
                                    double epsilon) {
    if (eta_list.empty() || probe_times.empty())
        throw std::invalid_argument("window_memory_test: need eta values and probe times");
    if (!(epsilon > 0.0)) throw std::invalid_argument("window_memory_test: epsilon must be positive");

    const double t_max = *std::max_element(probe_times.begin(), probe_times.end());
    const std::vector<double> full = runner(input, t_max);
    auto sample_at = [T_s](const std::vector<double>& y, double t) {
        const auto idx = static_cast<std::size_t>(std::llround(t / T_s));
        if (idx >= y.size())
            throw std::runtime_error("window_memory_test: runner output shorter than probe time");
        return y[idx];
    };

    MemoryTestResult result;
    result.eta_values = eta_list;
    result.epsilon = epsilon;
    for (double eta : eta_list) {
        double worst = 0.0;
        for (double t_probe : probe_times) {
            const RefSignal windowed = RefSignal::analytic(
                [input, t_probe, eta](double t) {
                    return (t >= t_probe - eta && t <= t_probe) ? input.at_time(t) : 0.0;
                },
                "windowed");
            const std::vector<double> win = runner(windowed, t_probe);
            worst = std::max(worst,
                             std::abs(sample_at(full, t_probe) - sample_at(win, t_probe)));
        }
        result.eps_values.push_back(worst);
    }
    result.violated = true;
    for (double eps : result.eps_values)
        if (eps < epsilon) result.violated = false;
    return result;
}

std::vector<double> detect_spikes(std::span<const double> y, double T_s, double threshold,
                                  double min_separation) {
    if (!(min_separation > 0.0))
        throw std::invalid_argument("detect_spikes: min_separation must be positive");
    std::vector<double> times;
    bool above = !y.empty() && y[0] >= threshold;
    double last = -2.0 * min_separation;
    for (std::size_t n = 1; n < y.size(); ++n) {
        const bool now_above = y[n] >= threshold;
        if (now_above && !above) {
            const double t = static_cast<double>(n) * T_s;
            if (t - last >= min_separation) {
                times.push_back(t);
                last = t;
            }
        }
        above = now_above;
    }
    return times;
}

SpikeReport spike_match(std::span<const double> y_ref, std::span<const double> y_model,
                        double T_s, double threshold, double min_separation) {
    SpikeReport report;
    report.ref_times = detect_spikes(y_ref, T_s, threshold, min_separation);
    report.model_times = detect_spikes(y_model, T_s, threshold, min_separation);

    const double tol = 0.5 * min_separation;
    std::vector<bool> used(report.model_times.size(), false);
    for (double tr : report.ref_times) {
        int best = -1;
        double best_dist = tol;
        for (std::size_t j = 0; j < report.model_times.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(report.model_times[j] - tr);
            if (d <= best_dist) {
                best = static_cast<int>(j);
                best_dist = d;
            }
        }
        if (best >= 0) {
            used[static_cast<std::size_t>(best)] = true;
            ++report.matched;
        } else {
            ++report.missed;
        }
    }
    report.extra = static_cast<int>(report.model_times.size()) - report.matched;
    return report;
}

DoubleScrollReport double_scroll_check(const StateTrajectory& traj, double lobe_threshold) {
    if (traj.states.empty() || traj.states[0].empty())
        throw std::invalid_argument("double_scroll_check: empty trajectory");
    if (!(lobe_threshold > 0.0))
        throw std::invalid_argument("double_scroll_check: lobe threshold must be positive");

    DoubleScrollReport rep;
    const std::size_t n = traj.states[0].size();
    std::size_t pos = 0, neg = 0;
    int last_lobe = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double norm_sq = 0.0;
        for (const auto& coord : traj.states) norm_sq += coord[i] * coord[i];
        rep.max_state_norm = std::max(rep.max_state_norm, std::sqrt(norm_sq));
        const double x1 = traj.states[0][i];
        const int lobe = x1 > lobe_threshold ? 1 : (x1 < -lobe_threshold ? -1 : 0);
        if (lobe > 0) ++pos;
        if (lobe < 0) ++neg;
        if (lobe != 0) {
            if (last_lobe != 0 && lobe != last_lobe) ++rep.transitions;
            last_lobe = lobe;
        }
    }
    rep.fraction_positive = static_cast<double>(pos) / static_cast<double>(n);
    rep.fraction_negative = static_cast<double>(neg) / static_cast<double>(n);
    rep.bounded = rep.max_state_norm < 100.0;
    rep.ok = rep.bounded && rep.fraction_positive >= 0.05 && rep.fraction_negative >= 0.05 &&
             rep.transitions >= 10;
    return rep;
}

double max_autocorrelation(std::span<const double> y, double T_s, double lag_min,
                           double lag_max) {
    if (y.size() < 16) throw std::invalid_argument("max_autocorrelation: signal too short");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(y.size());
    if (var == 0.0) return 1.0;

    const auto lag_lo = static_cast<std::size_t>(std::llround(lag_min / T_s));
    const auto lag_hi = std::min(static_cast<std::size_t>(std::llround(lag_max / T_s)),
                                 y.size() - 2);
    double best = -1.0;
    for (std::size_t lag = std::max<std::size_t>(lag_lo, 1); lag <= lag_hi; ++lag) {
        double acc = 0.0;
        const std::size_t count = y.size() - lag;
        for (std::size_t n = 0; n < count; ++n) acc += (y[n] - mean) * (y[n + lag] - mean);
        best = std::max(best, acc / (static_cast<double>(count) * var));
    }
    return best;
}

}  // namespace lureid
