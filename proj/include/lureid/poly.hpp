#pragma once

#include <complex>
#include <vector>

namespace lureid::poly {

using Complex = std::complex<double>;

/// Coefficient lists are in descending powers of s; poly[0] is the leading
/// coefficient. An empty list is the zero polynomial.

int degree(const std::vector<double>& p);

/// Horner evaluation at a complex point.
Complex eval(const std::vector<double>& p, Complex s);
double eval_real(const std::vector<double>& p, double x);

/// Derivative coefficients.
std::vector<double> derivative(const std::vector<double>& p);

std::vector<double> multiply(const std::vector<double>& a,
                             const std::vector<double>& b);
std::vector<double> add(const std::vector<double>& a,
                        const std::vector<double>& b);
std::vector<double> scale(const std::vector<double>& p, double factor);

/// Strip leading coefficients with magnitude <= tol (relative to the largest
/// coefficient when rel is true).
std::vector<double> trim_leading(const std::vector<double>& p, double tol = 0.0,
                                 bool rel = false);

/// Roots via companion-matrix eigenvalues. Throws std::runtime_error when the
/// eigensolver fails. Degree-0 input yields no roots.
std::vector<Complex> roots(const std::vector<double>& p);

/// Monic polynomial with the given roots; complex inputs must come in
/// conjugate pairs (imaginary residue is discarded after pairing).
std::vector<double> from_roots(const std::vector<Complex>& rts);

}  // namespace lureid::poly
