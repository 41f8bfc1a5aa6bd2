#include "lureid/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lureid::poly {

int degree(const std::vector<double>& p) {
    return static_cast<int>(p.size()) - 1;
}

Complex eval(const std::vector<double>& p, Complex s) {
    Complex acc{0.0, 0.0};
    for (double c : p) acc = acc * s + c;
    return acc;
}

double eval_real(const std::vector<double>& p, double x) {
    double acc = 0.0;
    for (double c : p) acc = acc * x + c;
    return acc;
}

std::vector<double> derivative(const std::vector<double>& p) {
    const int n = degree(p);
    if (n <= 0) return {};
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[i] = p[i] * static_cast<double>(n - i);
    return d;
}

std::vector<double> multiply(const std::vector<double>& a,
                             const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> add(const std::vector<double>& a,
                        const std::vector<double>& b) {
    // Descending powers align at the tail.
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[n - a.size() + i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        out[n - b.size() + i] += b[i];
    return out;
}

std::vector<double> scale(const std::vector<double>& p, double factor) {
    std::vector<double> out = p;
    for (double& c : out) c *= factor;
    return out;
}

std::vector<double> trim_leading(const std::vector<double>& p, double tol,
                                 bool rel) {
    double ref = 1.0;
    if (rel) {
        ref = 0.0;
        for (double c : p) ref = std::max(ref, std::abs(c));
        if (ref == 0.0) return {};
    }
    std::size_t start = 0;
    while (start < p.size() && std::abs(p[start]) <= tol * ref) ++start;
    return {p.begin() + static_cast<std::ptrdiff_t>(start), p.end()};
}

std::vector<Complex> roots(const std::vector<double>& p) {
    std::vector<double> q = trim_leading(p);
    const int n = degree(q);
    if (n <= 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = -q[i + 1] / q[0];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("poly::roots: eigensolver failed");
    std::vector<Complex> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

std::vector<double> from_roots(const std::vector<Complex>& rts) {
    std::vector<Complex> acc{Complex{1.0, 0.0}};
    for (Complex r : rts) {
        std::vector<Complex> next(acc.size() + 1, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i];
            next[i + 1] -= acc[i] * r;
        }
        acc = std::move(next);
    }
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].real();
    return out;
}

}  // namespace lureid::poly
