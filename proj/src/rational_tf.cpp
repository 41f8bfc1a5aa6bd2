#include "lureid/rational_tf.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lureid {

namespace {
constexpr double kStabilityMargin = 1e-9;
}

RationalTF::RationalTF(std::vector<double> num, std::vector<double> den)
    : num_(poly::trim_leading(std::move(num))), den_(poly::trim_leading(std::move(den))) {
    if (den_.empty())
        throw std::invalid_argument("RationalTF: zero denominator");
    for (double c : num_)
        if (!std::isfinite(c)) throw std::invalid_argument("RationalTF: non-finite numerator");
    for (double c : den_)
        if (!std::isfinite(c)) throw std::invalid_argument("RationalTF: non-finite denominator");
    const double lead = den_[0];
    for (double& c : den_) c /= lead;
    for (double& c : num_) c /= lead;
    if (num_.empty()) num_ = {0.0};
}

bool RationalTF::is_zero() const {
    for (double c : num_)
        if (c != 0.0) return false;
    return true;
}

double RationalTF::gain_at_zero() const {
    return poly::eval_real(num_, 0.0) / poly::eval_real(den_, 0.0);
}

std::string RationalTF::describe() const {
    auto poly_str = [](const std::vector<double>& p) {
        std::ostringstream os;
        const int n = poly::degree(p);
        bool first = true;
        for (int i = 0; i <= n; ++i) {
            const double c = p[static_cast<std::size_t>(i)];
            if (c == 0.0 && n > 0) continue;
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << "-";
            first = false;
            const int pw = n - i;
            const double a = std::abs(c);
            if (pw == 0 || a != 1.0) os << a;
            if (pw >= 1) os << "s";
            if (pw >= 2) os << "^" << pw;
        }
        if (first) os << "0";
        return os.str();
    };
    return "(" + poly_str(num_) + ") / (" + poly_str(den_) + ")";
}

std::complex<double> eval_freq(const RationalTF& tf, double omega) {
    const std::complex<double> s{0.0, omega};
    const std::complex<double> d = poly::eval(tf.den(), s);
    if (std::abs(d) < 1e-14)
        throw std::runtime_error("eval_freq: denominator nearly singular at omega=" +
                                 std::to_string(omega));
    return poly::eval(tf.num(), s) / d;
}

bool is_hurwitz(const RationalTF& tf) {
    for (auto p : tf.poles())
        if (p.real() >= -kStabilityMargin) return false;
    return true;
}

double slowest_decay_rate(const RationalTF& tf) {
    double rate = std::numeric_limits<double>::infinity();
    for (auto p : tf.poles()) rate = std::min(rate, -p.real());
    if (!(rate > 0.0))
        throw std::runtime_error("slowest_decay_rate: transfer function is not Hurwitz");
    return rate;
}

}  // namespace lureid
