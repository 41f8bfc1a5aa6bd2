#pragma once

#include <complex>
#include <string>
#include <vector>

#include "lureid/poly.hpp"

namespace lureid {

/// Real-rational transfer function N(s)/D(s), coefficients in descending
/// powers of s. The denominator is normalized so its leading coefficient
/// is 1; exact leading zeros of the numerator are stripped.
class RationalTF {
public:
    RationalTF() : num_{0.0}, den_{1.0} {}

    RationalTF(std::vector<double> num, std::vector<double> den);

    static RationalTF zero() { return RationalTF({0.0}, {1.0}); }

    const std::vector<double>& num() const { return num_; }
    const std::vector<double>& den() const { return den_; }

    int num_degree() const { return poly::degree(num_); }
    int den_degree() const { return poly::degree(den_); }
    int relative_degree() const { return den_degree() - num_degree(); }

    bool is_strictly_proper() const { return relative_degree() >= 1 || is_zero(); }
    bool is_proper() const { return relative_degree() >= 0 || is_zero(); }
    bool is_zero() const;

    /// Poles (denominator roots) via companion-matrix eigenvalues.
    std::vector<std::complex<double>> poles() const { return poly::roots(den_); }
    std::vector<std::complex<double>> zeros() const { return poly::roots(num_); }

    /// DC gain N(0)/D(0).
    double gain_at_zero() const;

    std::string describe() const;

    friend bool operator==(const RationalTF& a, const RationalTF& b) = default;

private:
    std::vector<double> num_;
    std::vector<double> den_;
};

/// G(j*omega). Throws on a near-singular denominator (|D(jw)| < 1e-14).
std::complex<double> eval_freq(const RationalTF& tf, double omega);

/// True iff every pole satisfies Re[p] < -1e-9.
bool is_hurwitz(const RationalTF& tf);

/// Slowest decay rate: min over poles of -Re[p]. Throws when not Hurwitz.
double slowest_decay_rate(const RationalTF& tf);

}  // namespace lureid
