#include "lureid/dynamic_ident.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "lureid/parallel.hpp"
#include "lureid/rng.hpp"

namespace lureid {

namespace {

/// One-shot r2c DFT helper reused across equally sized blocks.
class RealDft {
public:
    explicit RealDft(std::int64_t n)
        : n_(n), in_(static_cast<std::size_t>(n)), out_(static_cast<std::size_t>(n / 2 + 1)) {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.data(), out_.data(),
                                     FFTW_ESTIMATE);
        if (!plan_) throw std::runtime_error("estimate_frf: fftw plan creation failed");
    }
    ~RealDft() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan_);
    }
    RealDft(const RealDft&) = delete;
    RealDft& operator=(const RealDft&) = delete;

    /// DFT of data[first, first + n); bin k accessible via bin(k).
    void transform(const std::vector<double>& data, std::size_t first) {
        std::memcpy(in_.data(), data.data() + first, sizeof(double) * static_cast<std::size_t>(n_));
        fftw_execute(plan_);
    }
    std::complex<double> bin(std::int64_t k) const {
        return {out_[static_cast<std::size_t>(k)][0], out_[static_cast<std::size_t>(k)][1]};
    }

private:
    std::int64_t n_;
    std::vector<double> in_;
    std::vector<fftw_complex> out_;
    fftw_plan plan_;
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

std::vector<SampledRecord> run_dynamic_stage(const LureModel& model,
                                             const std::vector<StaticNL::Term>& cancel_terms,
                                             const DynamicStageOptions& opt) {
    DynamicRecordSource source = [&](int r, const Multisine& ms) {
        SimConfig cfg;
        cfg.T_s = opt.multisine.T_s;
        cfg.dt_internal = opt.dt_internal;
        cfg.duration = ms.spec.T * ms.spec.periods;
        cfg.sigma = opt.sigma;
        cfg.seed = CounterRng::derive(opt.seed, 202, static_cast<std::uint64_t>(r));
        cfg.record_truth = false;
        cfg.loop_mode = opt.loop_mode;
        const RefSignal ref = opt.loop_mode == LoopMode::analog ? ms.as_analytic_ref()
                                                                : ms.as_sampled_ref();
        return simulate(model, Controller::feedback_linearizing(opt.k, cancel_terms, ref), cfg);
    };
    return run_dynamic_stage_from_source(source, opt);
}

std::vector<SampledRecord> run_dynamic_stage_from_source(const DynamicRecordSource& source,
                                                         const DynamicStageOptions& opt) {
    if (opt.realizations < 1)
        throw std::invalid_argument("run_dynamic_stage: need at least one realization");
    opt.multisine.validate();
    std::vector<SampledRecord> records(static_cast<std::size_t>(opt.realizations));
    parallel_for_index(opt.realizations, opt.workers, [&](int r) {
        MultisineSpec spec = opt.multisine;
        spec.seed = CounterRng::derive(opt.seed, 203, static_cast<std::uint64_t>(r));
        const Multisine ms = make_multisine(spec);
        try {
            records[static_cast<std::size_t>(r)] = source(r, ms);
        } catch (const std::exception& err) {
            throw std::runtime_error("run_dynamic_stage: realization " + std::to_string(r) +
                                     " failed: " + err.what());
        }
    });
    return records;
}

FrfEstimate estimate_frf(const std::vector<SampledRecord>& records, const MultisineSpec& spec) {
    spec.validate();
    if (records.empty()) throw std::invalid_argument("estimate_frf: no records");
    const std::int64_t n = spec.samples_per_period();
    const std::int64_t nf = spec.harmonic_count();

    FrfEstimate frf;
    frf.realizations = static_cast<int>(records.size());
    frf.freq_hz.resize(static_cast<std::size_t>(nf));
    for (std::int64_t l = 1; l <= nf; ++l)
        frf.freq_hz[static_cast<std::size_t>(l - 1)] = static_cast<double>(l) / spec.T;

    std::vector<std::vector<std::complex<double>>> ratios(
        records.size(), std::vector<std::complex<double>>(static_cast<std::size_t>(nf)));

    RealDft dft(n);
    for (std::size_t r = 0; r < records.size(); ++r) {
        const SampledRecord& rec = records[r];
        if (rec.size() < static_cast<std::size_t>(2 * n))
            throw std::invalid_argument("estimate_frf: record " + std::to_string(r) +
                                        " shorter than two periods");
        const std::size_t first = rec.size() - static_cast<std::size_t>(n);

        dft.transform(rec.v_r, first);
        std::vector<std::complex<double>> vr(static_cast<std::size_t>(nf));
        for (std::int64_t l = 1; l <= nf; ++l) {
            vr[static_cast<std::size_t>(l - 1)] = dft.bin(l);
            if (std::abs(vr[static_cast<std::size_t>(l - 1)]) < 1e-12)
                throw std::runtime_error("estimate_frf: excitation hole at harmonic " +
                                         std::to_string(l));
        }
        dft.transform(rec.v_m, first);
        for (std::int64_t l = 1; l <= nf; ++l)
            ratios[r][static_cast<std::size_t>(l - 1)] =
                dft.bin(l) / vr[static_cast<std::size_t>(l - 1)];
    }

    frf.response.assign(static_cast<std::size_t>(nf), {0.0, 0.0});
    frf.variance.assign(static_cast<std::size_t>(nf), 0.0);
    for (std::size_t l = 0; l < static_cast<std::size_t>(nf); ++l) {
        std::complex<double> mean{0.0, 0.0};
        for (const auto& rr : ratios) mean += rr[l];
        mean /= static_cast<double>(records.size());
        frf.response[l] = mean;
        if (records.size() > 1) {
            double var = 0.0;
            for (const auto& rr : ratios) var += std::norm(rr[l] - mean);
            frf.variance[l] = var / static_cast<double>(records.size() - 1);
        }
    }
    return frf;
}

RationalTF fit_rational(const FrfEstimate& frf, int n_poles, int n_zeros,
                        RationalFitDiagnostics* diag) {
    if (n_zeros >= n_poles)
        throw std::invalid_argument("fit_rational: requires n_zeros < n_poles");
    const auto bins = static_cast<Eigen::Index>(frf.response.size());
    if (bins < 3 * (n_poles + n_zeros + 1))
        throw std::invalid_argument("fit_rational: need at least 3*(n_poles+n_zeros+1) bins");

    // Per-bin weights 1/max(variance, floor); uniform in the noiseless case.
    double max_resp = 0.0;
    for (const auto& g : frf.response) max_resp = std::max(max_resp, std::abs(g));
    const double floor = std::max(1e-14 * max_resp * max_resp, 1e-300);
    Eigen::VectorXd weight(bins);
    for (Eigen::Index i = 0; i < bins; ++i)
        weight(i) = 1.0 / std::max(frf.variance[static_cast<std::size_t>(i)], floor);

    // Scaled frequencies keep the Vandermonde-like columns balanced.
    const double w_scale = 2.0 * std::numbers::pi * frf.freq_hz.back();
    std::vector<std::complex<double>> s_scaled(static_cast<std::size_t>(bins));
    for (Eigen::Index i = 0; i < bins; ++i)
        s_scaled[static_cast<std::size_t>(i)] = {
            0.0, 2.0 * std::numbers::pi * frf.freq_hz[static_cast<std::size_t>(i)] / w_scale};

    const Eigen::Index n_b = n_zeros + 1;  // numerator coeffs, ascending power
    const Eigen::Index n_a = n_poles;      // denominator coeffs below the monic lead
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n_b + n_a);

    auto den_at = [&](const Eigen::VectorXd& c, std::complex<double> s) {
        std::complex<double> acc{1.0, 0.0};  // monic lead
        for (Eigen::Index q = n_a - 1; q >= 0; --q) acc = acc * s + c(n_b + q);
        if (n_a == 0) acc = {1.0, 0.0};
        return acc;
    };
    Eigen::MatrixXd rows(2 * bins, n_b + n_a);
    Eigen::VectorXd rhs(2 * bins);
    int iterations = 0;
    for (int it = 0; it < 50; ++it) {
        ++iterations;
        for (Eigen::Index i = 0; i < bins; ++i) {
            const std::complex<double> s = s_scaled[static_cast<std::size_t>(i)];
            const std::complex<double> f = frf.response[static_cast<std::size_t>(i)];
            const double sk = it == 0 ? 1.0 : std::abs(den_at(coeffs, s));
            const double w = std::sqrt(weight(i)) / std::max(sk, 1e-12);
            std::complex<double> spow{1.0, 0.0};
            for (Eigen::Index q = 0; q < std::max(n_b, n_a); ++q) {
                if (q < n_b) {
                    rows(2 * i, q) = w * spow.real();
                    rows(2 * i + 1, q) = w * spow.imag();
                }
                if (q < n_a) {
                    const std::complex<double> e = -f * spow;
                    rows(2 * i, n_b + q) = w * e.real();
                    rows(2 * i + 1, n_b + q) = w * e.imag();
                }
                spow *= s;
            }
            std::complex<double> s_np{1.0, 0.0};
            for (int q = 0; q < n_poles; ++q) s_np *= s;
            const std::complex<double> r = f * s_np;
            rhs(2 * i) = w * r.real();
            rhs(2 * i + 1) = w * r.imag();
        }
        const Eigen::VectorXd next = rows.colPivHouseholderQr().solve(rhs);
        const double change = (next - coeffs).norm() / std::max(1.0, next.norm());
        coeffs = next;
        if (it > 0 && change < 1e-10) break;
    }

    auto build_tf = [&](const Eigen::VectorXd& c) {
        std::vector<double> num(static_cast<std::size_t>(n_b));
        std::vector<double> den(static_cast<std::size_t>(n_poles) + 1);
        for (Eigen::Index q = 0; q < n_b; ++q)
            num[static_cast<std::size_t>(n_b - 1 - q)] =
                c(q) * std::pow(w_scale, static_cast<double>(n_poles - q));
        den[0] = 1.0;
        for (Eigen::Index q = 0; q < n_a; ++q)
            den[static_cast<std::size_t>(n_poles - q)] =
                c(n_b + q) * std::pow(w_scale, static_cast<double>(n_poles - q));
        return RationalTF(num, den);
    };

    auto weighted_residual = [&](const RationalTF& tf) {
        double acc = 0.0, norm = 0.0;
        for (Eigen::Index i = 0; i < bins; ++i) {
            const double w_hz = frf.freq_hz[static_cast<std::size_t>(i)];
            const std::complex<double> g = eval_freq(tf, 2.0 * std::numbers::pi * w_hz);
            acc += weight(i) * std::norm(g - frf.response[static_cast<std::size_t>(i)]);
            norm += weight(i) * std::norm(frf.response[static_cast<std::size_t>(i)]);
        }
        return std::sqrt(acc / std::max(norm, 1e-300));
    };

    RationalTF fit = build_tf(coeffs);
    bool reflected = false;
    if (!is_hurwitz(fit)) {
        // Reflect offending poles, rebuild the denominator, refit the
        // numerator linearly against the final weights.
        auto poles = fit.poles();
        for (auto& p : poles)
            if (p.real() > -1e-9)
                p = std::complex<double>(std::min(-std::abs(p.real()), -1e-8), p.imag());
        const std::vector<double> den_ref = poly::from_roots(poles);
        Eigen::MatrixXd nrows(2 * bins, n_b);
        Eigen::VectorXd nrhs(2 * bins);
        for (Eigen::Index i = 0; i < bins; ++i) {
            const double omega =
                2.0 * std::numbers::pi * frf.freq_hz[static_cast<std::size_t>(i)];
            const std::complex<double> s{0.0, omega / w_scale};
            const std::complex<double> d = poly::eval(den_ref, std::complex<double>(0.0, omega));
            const double w = std::sqrt(weight(i));
            std::complex<double> spow{1.0, 0.0};
            for (Eigen::Index q = 0; q < n_b; ++q) {
                const std::complex<double> col = spow;
                nrows(2 * i, q) = w * col.real();
                nrows(2 * i + 1, q) = w * col.imag();
                spow *= s;
            }
            const std::complex<double> target = frf.response[static_cast<std::size_t>(i)] * d /
                                                std::pow(w_scale, static_cast<double>(n_poles));
            nrhs(2 * i) = w * target.real();
            nrhs(2 * i + 1) = w * target.imag();
        }
        const Eigen::VectorXd nb = nrows.colPivHouseholderQr().solve(nrhs);
        std::vector<double> num(static_cast<std::size_t>(n_b));
        for (Eigen::Index q = 0; q < n_b; ++q)
            num[static_cast<std::size_t>(n_b - 1 - q)] =
                nb(q) * std::pow(w_scale, static_cast<double>(n_poles - q));
        const RationalTF stabilized(num, den_ref);

        const double res_orig = weighted_residual(fit);
        const double res_stab = weighted_residual(stabilized);
        // Reflection with the 1e-8 clearance perturbs the response by about
        // clearance/omega_min; anything below 1e-6 relative residual is a
        // no-op for measured data.
        if (res_stab > 1.01 * res_orig + 1e-6)
            throw std::runtime_error(
                "fit_rational: unstable fit could not be stabilized without residual loss");
        fit = stabilized;
        reflected = true;
    }

    if (diag) {
        diag->iterations = iterations;
        diag->weighted_residual = weighted_residual(fit);
        diag->poles_reflected = reflected;
    }
    return fit;
}

RationalTF recover_ga(const RationalTF& g_k_hat, double k) {
    if (k == 0.0) throw std::invalid_argument("recover_ga: k must be nonzero");
    if (g_k_hat.is_zero()) return RationalTF::zero();

    const std::vector<double> num_raw = poly::scale(g_k_hat.num(), 1.0 / k);
    const std::vector<double> den_raw =
        poly::add(g_k_hat.den(), poly::scale(g_k_hat.num(), -1.0));

    const double num_ref = max_abs(num_raw);
    const double den_ref = max_abs(den_raw);
    const std::vector<double> num = poly::trim_leading(num_raw, 1e-9 * num_ref);
    const std::vector<double> den = poly::trim_leading(den_raw, 1e-9 * den_ref);
    const std::size_t dropped_num = num_raw.size() - num.size();
    const std::size_t dropped_den = den_raw.size() - den.size();
    if (den.empty() || dropped_den > dropped_num)
        throw std::runtime_error(
            "recover_ga: ill-posed recovery (leading coefficient of 1 - G_k vanished)");
    return RationalTF(num.empty() ? std::vector<double>{0.0} : num, den);
}

IdentifiedModel assemble_model(const RationalTF& g_a_hat, const StaticFit& static_fit,
                               double k, const RationalTF& g_k_hat) {
    IdentifiedModel out;
    out.g_a_hat = g_a_hat;
    out.k = k;
    out.g_k_hat = g_k_hat;
    out.g_a_poles = g_a_hat.poles();
    if (!g_k_hat.is_zero()) out.g_k_poles = g_k_hat.poles();

    std::pair<double, double> domain = static_fit.fit_range;
    if (!(domain.first < domain.second)) domain = {-5.0, 5.0};
    StaticNL h_hat(0.0, static_fit.nonlinear_terms(), SectorBounds(0.0, 0.0), domain);
    const SectorBounds sector = empirical_sector(h_hat, domain, 2001);
    out.h_hat = StaticNL(0.0, static_fit.nonlinear_terms(), sector, domain);
    return out;
}

LureModel as_lure_model(const IdentifiedModel& model, const std::string& name) {
    return LureModel{model.g_a_hat, model.h_hat, name};
}

}  // namespace lureid
