#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lureid {

/// Reference/input signal usable both at controller ticks and in continuous
/// time (analog loop mode). Sampled signals extend by zero-order hold and
/// clamp at the end.
class RefSignal {
public:
    static RefSignal constant(double value) {
        RefSignal s;
        s.kind_ = Kind::constant;
        s.value_ = value;
        s.desc_ = "const(" + std::to_string(value) + ")";
        return s;
    }

    static RefSignal sampled(std::vector<double> samples, double T_s, std::string desc = "sampled") {
        if (samples.empty()) throw std::invalid_argument("RefSignal::sampled: empty signal");
        RefSignal s;
        s.kind_ = Kind::sampled;
        s.samples_ = std::make_shared<std::vector<double>>(std::move(samples));
        s.T_s_ = T_s;
        s.desc_ = std::move(desc);
        return s;
    }

    static RefSignal analytic(std::function<double(double)> fn, std::string desc = "analytic") {
        RefSignal s;
        s.kind_ = Kind::analytic;
        s.fn_ = std::move(fn);
        s.desc_ = std::move(desc);
        return s;
    }

    double at_tick(std::int64_t n, double T_s) const {
        switch (kind_) {
            case Kind::constant:
                return value_;
            case Kind::sampled: {
                const auto& v = *samples_;
                const std::size_t i =
                    static_cast<std::size_t>(std::min<std::int64_t>(
                        std::max<std::int64_t>(n, 0), static_cast<std::int64_t>(v.size()) - 1));
                return v[i];
            }
            case Kind::analytic:
                return fn_(static_cast<double>(n) * T_s);
        }
        return 0.0;
    }

    double at_time(double t) const {
        switch (kind_) {
            case Kind::constant:
                return value_;
            case Kind::sampled:
                return at_tick(static_cast<std::int64_t>(std::floor(t / T_s_ + 1e-12)), T_s_);
            case Kind::analytic:
                return fn_(t);
        }
        return 0.0;
    }

    const std::string& description() const { return desc_; }

private:
    enum class Kind { constant, sampled, analytic };
    Kind kind_ = Kind::constant;
    double value_ = 0.0;
    std::shared_ptr<const std::vector<double>> samples_;
    double T_s_ = 1.0;
    std::function<double(double)> fn_;
    std::string desc_;
};

/// Rectangular pulse amp * (mu(t - t1) - mu(t - t2)), active on [t1, t2).
RefSignal pulse(double t1, double t2, double amplitude);

}  // namespace lureid
