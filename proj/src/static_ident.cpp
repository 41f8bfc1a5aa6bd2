#include "lureid/static_ident.hpp"

#include <cmath>
#include <stdexcept>

#include "lureid/parallel.hpp"
#include "lureid/rng.hpp"

namespace lureid {

std::vector<StaticNL::Term> StaticFit::nonlinear_terms() const {
    std::vector<StaticNL::Term> terms;
    for (std::size_t j = 0; j < bases.size(); ++j)
        terms.push_back({w_hat[j + 1], bases[j]});
    return terms;
}

namespace {

EquilibriumDataset average_records(const std::vector<SampledRecord>& records,
                                   const StaticStageOptions& opt) {
    EquilibriumDataset data;
    data.v_ref = opt.grid;
    data.n_avg = opt.n_avg;
    const auto settle_ticks = opt.full_record_average
                                  ? std::size_t{0}
                                  : static_cast<std::size_t>(std::llround(opt.settle_time / opt.T_s));

    for (std::size_t m = 0; m < records.size(); ++m) {
        const SampledRecord& rec = records[m];
        const auto n_avg = opt.full_record_average ? rec.size()
                                                   : static_cast<std::size_t>(opt.n_avg);
        if (rec.size() < settle_ticks + n_avg)
            throw std::runtime_error("run_static_stage: record too short at grid point " +
                                     std::to_string(m));
        double sum_v = 0.0, sum_i = 0.0, half1 = 0.0, half2 = 0.0;
        for (std::size_t n = 0; n < n_avg; ++n) {
            const double vm = rec.v_m[settle_ticks + n];
            sum_v += vm;
            sum_i += rec.i_m[settle_ticks + n];
            (n < n_avg / 2 ? half1 : half2) += vm;
        }
        const double v_hat = sum_v / static_cast<double>(n_avg);
        const double drift = std::abs(half1 / static_cast<double>(n_avg / 2) -
                                      half2 / static_cast<double>(n_avg - n_avg / 2));
        if (!opt.full_record_average) {
            // Noise floor of the difference of two half-window means, plus a
            // small absolute floor so noiseless runs are judged on the
            // integrator scale rather than on zero.
            const double floor =
                5.0 * (2.0 * opt.sigma / std::sqrt(static_cast<double>(n_avg))) +
                1e-5 * (1.0 + std::abs(v_hat));
            if (drift > floor)
                throw std::runtime_error("run_static_stage: grid point " + std::to_string(m) +
                                         " (v_ref=" + std::to_string(data.v_ref[m]) +
                                         ") has not settled: drift " + std::to_string(drift));
        }
        data.v_hat.push_back(v_hat);
        data.i_hat.push_back(sum_i / static_cast<double>(n_avg));
        data.settle_drift.push_back(drift);
    }
    data.monotone = true;
    for (std::size_t m = 1; m < data.v_hat.size(); ++m)
        if (!(data.v_hat[m] > data.v_hat[m - 1])) data.monotone = false;
    return data;
}

double stage_duration(const StaticStageOptions& opt) {
    const double raw = opt.settle_time + static_cast<double>(opt.n_avg + 1) * opt.T_s;
    return std::ceil(raw / opt.T_s) * opt.T_s;
}

}  // namespace

EquilibriumDataset run_static_stage(const LureModel& model, const StaticStageOptions& opt) {
    const LureModel local = model;
    StaticRecordSource source = [&local, &opt](int m, double v_ref, double duration) {
        SimConfig cfg;
        cfg.T_s = opt.T_s;
        cfg.dt_internal = opt.dt_internal;
        cfg.duration = duration;
        cfg.sigma = opt.sigma;
        cfg.seed = CounterRng::derive(opt.seed, 101, static_cast<std::uint64_t>(m));
        cfg.record_truth = false;
        return simulate(local, Controller::linear(opt.k, RefSignal::constant(v_ref)), cfg);
    };
    return run_static_stage_from_source(source, opt);
}

EquilibriumDataset run_static_stage_from_source(const StaticRecordSource& source,
                                                const StaticStageOptions& opt) {
    if (opt.grid.size() < 2)
        throw std::invalid_argument("run_static_stage: grid needs at least 2 points");
    if (opt.n_avg < 2) throw std::invalid_argument("run_static_stage: n_avg must be >= 2");

    const int m_count = static_cast<int>(opt.grid.size());
    std::vector<SampledRecord> records(static_cast<std::size_t>(m_count));
    const double duration = stage_duration(opt);
    parallel_for_index(m_count, opt.workers, [&](int m) {
        records[static_cast<std::size_t>(m)] =
            source(m, opt.grid[static_cast<std::size_t>(m)], duration);
    });

    return average_records(records, opt);
}

Regression build_regression(const EquilibriumDataset& data, const std::vector<BasisFn>& bases,
                            bool enforce_conditioning) {
    const auto m_count = static_cast<Eigen::Index>(data.v_hat.size());
    const auto j_count = static_cast<Eigen::Index>(bases.size()) + 1;
    if (m_count < j_count)
        throw std::invalid_argument("build_regression: need at least as many grid points as terms");

    Regression reg;
    reg.phi.resize(m_count, j_count);
    reg.target.resize(m_count);
    for (Eigen::Index m = 0; m < m_count; ++m) {
        const double v = data.v_hat[static_cast<std::size_t>(m)];
        reg.phi(m, 0) = v;
        for (std::size_t j = 0; j < bases.size(); ++j)
            reg.phi(m, static_cast<Eigen::Index>(j) + 1) = bases[j].eval(v);
        reg.target(m) = data.i_hat[static_cast<std::size_t>(m)];
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(reg.phi);
    const double smin = svd.singularValues().minCoeff();
    reg.cond = smin > 0.0 ? svd.singularValues().maxCoeff() / smin
                          : std::numeric_limits<double>::infinity();
    if (enforce_conditioning && reg.cond > 1e10)
        throw std::runtime_error(
            "build_regression: design matrix ill-conditioned (cond=" + std::to_string(reg.cond) +
            "); widen or refine the reference grid");
    return reg;
}

StaticFit fit_static(const Regression& reg, const std::vector<BasisFn>& bases) {
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(reg.phi);
    if (qr.rank() < reg.phi.cols())
        throw std::runtime_error("fit_static: rank-deficient design matrix");
    const Eigen::VectorXd w = qr.solve(reg.target);

    StaticFit fit;
    fit.w_hat.assign(w.data(), w.data() + w.size());
    fit.bases = bases;
    fit.residual_norm = (reg.phi * w - reg.target).norm();
    fit.cond_phi = reg.cond;
    return fit;
}

StaticFit fit_static(const EquilibriumDataset& data, const std::vector<BasisFn>& bases) {
    StaticFit fit = fit_static(build_regression(data, bases), bases);
    if (!data.v_hat.empty())
        fit.fit_range = {data.v_hat.front(), data.v_hat.back()};
    return fit;
}

double i_inf_estimate(const StaticFit& fit, double v) {
    double acc = fit.w_hat[0] * v;
    for (std::size_t j = 0; j < fit.bases.size(); ++j)
        acc += fit.w_hat[j + 1] * fit.bases[j].eval(v);
    return acc;
}

std::vector<double> residual_vs_terms(const EquilibriumDataset& data,
                                      const std::vector<BasisFn>& bases) {
    std::vector<double> residuals;
    for (std::size_t j = 0; j <= bases.size(); ++j) {
        const std::vector<BasisFn> subset(bases.begin(), bases.begin() + static_cast<std::ptrdiff_t>(j));
        residuals.push_back(fit_static(build_regression(data, subset), subset).residual_norm);
    }
    return residuals;
}

std::vector<BasisFn> preset_bases(const std::string& model_name) {
    if (model_name == "fhn") return {BasisFn::monomial(2), BasisFn::monomial(3)};
    if (model_name == "chua") return {BasisFn::hinge_pos(1.0), BasisFn::hinge_neg(1.0)};
    throw std::invalid_argument("preset_bases: unknown model '" + model_name + "'");
}

}  // namespace lureid
