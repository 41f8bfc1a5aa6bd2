#include "lureid/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lureid {

namespace {

// Splits a proper tf into (strictly proper remainder, direct term).
// deg N == deg D at most, so one division step suffices.
std::pair<std::vector<double>, double> split_direct_term(const RationalTF& tf) {
    if (!tf.is_proper())
        throw std::invalid_argument("state space realization requires a proper transfer function");
    std::vector<double> num = tf.num();
    double direct = 0.0;
    if (tf.num_degree() == tf.den_degree() && !tf.is_zero()) {
        direct = num[0];  // den is monic
        num = poly::add(num, poly::scale(tf.den(), -direct));
        num = poly::trim_leading(num, 1e-300);
        if (num.empty()) num = {0.0};
    }
    return {num, direct};
}

}  // namespace

StateSpace to_controllable_canonical(const RationalTF& tf) {
    auto [num, direct] = split_direct_term(tf);
    const int n = tf.den_degree();
    if (n < 1) throw std::invalid_argument("to_controllable_canonical: static gain has no state");
    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.C = Eigen::RowVectorXd::Zero(n);
    ss.D = direct;
    for (int i = 0; i < n; ++i) ss.A(0, i) = -tf.den()[static_cast<std::size_t>(i + 1)];
    for (int i = 1; i < n; ++i) ss.A(i, i - 1) = 1.0;
    ss.B(0) = 1.0;
    const int m = poly::degree(num);
    for (int i = 0; i <= m; ++i) ss.C(n - 1 - (m - i)) = num[static_cast<std::size_t>(i)];
    return ss;
}

StateSpace to_modal_canonical(const RationalTF& tf) {
    auto [num, direct] = split_direct_term(tf);
    const int n = tf.den_degree();
    if (n < 1) throw std::invalid_argument("to_modal_canonical: static gain has no state");

    auto poles = poly::roots(tf.den());
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j)
            if (std::abs(poles[i] - poles[j]) < 1e-8)
                throw std::runtime_error(
                    "to_modal_canonical: repeated poles are unsupported (separation < 1e-8)");

    const std::vector<double> dden = poly::derivative(tf.den());

    struct Block {
        double re;
        double im;  // 0 for a real pole, > 0 for a pair
        std::complex<double> residue;
    };
    std::vector<Block> blocks;
    for (auto p : poles) {
        if (p.imag() < 0.0) continue;  // pair handled via its upper half member
        std::complex<double> r = poly::eval(num, p) / poly::eval(dden, p);
        const bool is_real = std::abs(p.imag()) < 1e-10 * std::max(1.0, std::abs(p.real()));
        blocks.push_back({p.real(), is_real ? 0.0 : p.imag(), r});
    }
    std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    });

    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.C = Eigen::RowVectorXd::Zero(n);
    ss.D = direct;
    int at = 0;
    for (const Block& blk : blocks) {
        if (blk.im == 0.0) {
            ss.A(at, at) = blk.re;
            ss.B(at) = 1.0;
            ss.C(at) = blk.residue.real();
            at += 1;
        } else {
            // r/(s-p) + conj pair = (alpha s + beta) / ((s-sigma)^2 + wd^2)
            const double alpha = 2.0 * blk.residue.real();
            const double beta =
                -2.0 * (blk.residue * std::conj(std::complex<double>(blk.re, blk.im))).real();
            ss.A(at, at) = blk.re;
            ss.A(at, at + 1) = blk.im;
            ss.A(at + 1, at) = -blk.im;
            ss.A(at + 1, at + 1) = blk.re;
            ss.B(at) = 1.0;
            ss.C(at) = alpha;
            ss.C(at + 1) = -(beta + alpha * blk.re) / blk.im;
            at += 2;
        }
    }
    return ss;
}

RationalTF transfer_function(const StateSpace& ss) {
    const int n = ss.order();
    // Faddeev-LeVerrier: char poly coefficients and resolvent matrices.
    std::vector<double> den(static_cast<std::size_t>(n) + 1, 0.0);
    den[0] = 1.0;
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    std::vector<double> num(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k <= n; ++k) {
        num[static_cast<std::size_t>(k - 1)] = (ss.C * M * ss.B)(0, 0);
        const Eigen::MatrixXd AM = ss.A * M;
        den[static_cast<std::size_t>(k)] = -AM.trace() / static_cast<double>(k);
        if (k < n) M = AM + den[static_cast<std::size_t>(k)] * Eigen::MatrixXd::Identity(n, n);
    }
    if (ss.D != 0.0) num = poly::add(num, poly::scale(den, ss.D));
    return RationalTF(num, den);
}

std::complex<double> eval_freq(const StateSpace& ss, double omega) {
    const int n = ss.order();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) * std::complex<double>(0.0, omega) -
                         ss.A.cast<std::complex<double>>();
    Eigen::VectorXcd x = m.partialPivLu().solve(ss.B.cast<std::complex<double>>());
    return (ss.C.cast<std::complex<double>>() * x)(0, 0) + ss.D;
}

}  // namespace lureid
