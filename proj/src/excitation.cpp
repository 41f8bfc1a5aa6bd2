#include "lureid/excitation.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "lureid/rng.hpp"

namespace lureid {

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

std::int64_t MultisineSpec::samples_per_period() const {
    return static_cast<std::int64_t>(std::llround(T / T_s));
}

std::int64_t MultisineSpec::harmonic_count() const {
    return static_cast<std::int64_t>(std::llround(f_max * T));
}

void MultisineSpec::validate() const {
    if (!(T > 0.0) || !(T_s > 0.0)) throw std::invalid_argument("multisine: T and T_s must be positive");
    const double n_real = T / T_s;
    if (std::abs(n_real - std::round(n_real)) > 1e-9 * n_real)
        throw std::invalid_argument("multisine: T must be an integer multiple of T_s");
    const double nf_real = f_max * T;
    if (std::abs(nf_real - std::round(nf_real)) > 1e-9 * std::max(1.0, nf_real))
        throw std::invalid_argument("multisine: f_max*T must be an integer harmonic count");
    if (harmonic_count() < 1) throw std::invalid_argument("multisine: need at least one harmonic");
    if (2 * harmonic_count() >= samples_per_period())
        throw std::invalid_argument("multisine: N_f must satisfy N_f < N/2 (aliasing)");
    if (periods < 1) throw std::invalid_argument("multisine: periods must be >= 1");
    if (u_bar < 0.0) throw std::invalid_argument("multisine: negative amplitude");
}

double u_bar_for_rms(double rms, std::int64_t n_harmonics) {
    if (n_harmonics < 1) throw std::invalid_argument("u_bar_for_rms: need harmonics");
    return rms / std::sqrt(static_cast<double>(n_harmonics) / 2.0);
}

double Multisine::value(double t) const {
    const double w0 = 2.0 * std::numbers::pi / spec.T;
    double acc = 0.0;
    for (std::size_t l = 0; l < phases.size(); ++l)
        acc += spec.u_bar * std::sin(w0 * static_cast<double>(l + 1) * t + phases[l]);
    return acc;
}

std::vector<double> Multisine::samples() const {
    std::vector<double> out;
    out.reserve(period_samples.size() * static_cast<std::size_t>(spec.periods));
    for (int p = 0; p < spec.periods; ++p)
        out.insert(out.end(), period_samples.begin(), period_samples.end());
    return out;
}

RefSignal Multisine::as_sampled_ref() const {
    return RefSignal::sampled(samples(), spec.T_s, "multisine");
}

RefSignal Multisine::as_analytic_ref() const {
    Multisine copy = *this;
    return RefSignal::analytic([copy](double t) { return copy.value(t); }, "multisine");
}

Multisine make_multisine_with_phases(const MultisineSpec& spec, std::vector<double> phases) {
    spec.validate();
    const std::int64_t n = spec.samples_per_period();
    const std::int64_t nf = spec.harmonic_count();
    if (static_cast<std::int64_t>(phases.size()) != nf)
        throw std::invalid_argument("multisine: phase count must equal N_f");

    // Hermitian spectrum with X_l = (u/2) e^{i (theta_l - pi/2)}; the c2r
    // transform then yields sum_l u sin(2 pi l n / N + theta_l) exactly.
    std::vector<fftw_complex> spectrum(static_cast<std::size_t>(n / 2 + 1));
    for (auto& c : spectrum) c[0] = c[1] = 0.0;
    for (std::int64_t l = 1; l <= nf; ++l) {
        const double phi = phases[static_cast<std::size_t>(l - 1)] - std::numbers::pi / 2.0;
        spectrum[static_cast<std::size_t>(l)][0] = 0.5 * spec.u_bar * std::cos(phi);
        spectrum[static_cast<std::size_t>(l)][1] = 0.5 * spec.u_bar * std::sin(phi);
    }

    Multisine out{spec, std::move(phases), std::vector<double>(static_cast<std::size_t>(n))};
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum.data(),
                                    out.period_samples.data(), FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("multisine: fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

Multisine make_multisine(const MultisineSpec& spec) {
    spec.validate();
    CounterRng rng(spec.seed, static_cast<std::uint64_t>(NoiseStream::phases));
    std::vector<double> phases(static_cast<std::size_t>(spec.harmonic_count()));
    for (double& p : phases) p = rng.next_angle();
    return make_multisine_with_phases(spec, std::move(phases));
}

std::vector<double> constant_grid(const GridSpec& spec) {
    if (spec.points < 2) throw std::invalid_argument("constant_grid: need at least 2 points");
    if (!(spec.v_min < spec.v_max)) throw std::invalid_argument("constant_grid: empty range");
    std::vector<double> out(static_cast<std::size_t>(spec.points));
    if (spec.spacing == GridSpec::Spacing::uniform) {
        const double step = (spec.v_max - spec.v_min) / (spec.points - 1);
        for (int i = 0; i < spec.points; ++i)
            out[static_cast<std::size_t>(i)] = spec.v_min + step * i;
        out.back() = spec.v_max;
    } else {
        const double mid = 0.5 * (spec.v_min + spec.v_max);
        const double half = 0.5 * (spec.v_max - spec.v_min);
        for (int i = 0; i < spec.points; ++i) {
            const double theta = std::numbers::pi * (2.0 * i + 1.0) / (2.0 * spec.points);
            out[static_cast<std::size_t>(spec.points - 1 - i)] = mid + half * std::cos(theta);
        }
    }
    return out;
}

RefSignal pulse(double t1, double t2, double amplitude) {
    if (!(t2 > t1) || !(t1 > 0.0))
        throw std::invalid_argument("pulse: need t2 > t1 > 0");
    return RefSignal::analytic(
        [t1, t2, amplitude](double t) { return (t >= t1 && t < t2) ? amplitude : 0.0; },
        "pulse");
}

}  // namespace lureid
