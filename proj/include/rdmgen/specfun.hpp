#pragma once

#include <complex>

// Orthogonal polynomials by three-term recurrence.
//
// Hermite polynomials use the PHYSICISTS' convention,
//   exp(-t^2 + 2 t x) = sum_n H_n(x) t^n / n!,   H_{n+1} = 2x H_n - 2n H_{n-1},
// so H_2(x) = 4x^2 - 2. The probabilists' He_n would silently corrupt the
// strong-drive excitation series that consumes these values.
namespace rdm::specfun {

// L_n(x), (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}.
double laguerre(int n, double x);

double hermite(int n, double x);
std::complex<double> hermite(int n, std::complex<double> z);

// scale^n * H_n(z) / sqrt(n!), evaluated without forming H_n(z) itself.
// Stays finite when |z| is huge but |scale * z| is moderate.
std::complex<double> hermite_scaled(int n, std::complex<double> z, double scale);

// ln(n!): exact product for n <= 20, lgamma beyond.
double log_factorial(int n);

// |lhs - rhs| / max(1, |rhs|) for
//   sum_k C(n,k) H_{2n-2k}(x) H_{2k}(y) = (-4)^n n! L_n(x^2 + y^2).
double hermite_laguerre_residual(int n, double x, double y);

}  // namespace rdm::specfun
