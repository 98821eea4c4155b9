#include "rdmgen/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace rdm::specfun {

double laguerre(int n, double x) {
  if (n <= 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

template <class T>
T hermite_impl(int n, T x) {
  if (n <= 0) return T(1.0);
  T prev(1.0);
  T cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const T next = 2.0 * x * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

double hermite(int n, double x) { return hermite_impl(n, x); }

std::complex<double> hermite(int n, std::complex<double> z) { return hermite_impl(n, z); }

std::complex<double> hermite_scaled(int n, std::complex<double> z, double scale) {
  // h_k = scale^k H_k(z) / sqrt(k!)
  // h_{k+1} = (2 z scale h_k - 2 sqrt(k) scale^2 h_{k-1}) / sqrt(k+1)
  using C = std::complex<double>;
  if (n <= 0) return C(1.0);
  const C zs = z * scale;
  const double s2 = scale * scale;
  C prev(1.0);
  C cur = 2.0 * zs;
  for (int k = 1; k < n; ++k) {
    const C next = (2.0 * zs * cur - 2.0 * std::sqrt(double(k)) * s2 * prev) / std::sqrt(k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_factorial(int n) {
  static const std::array<double, 21> table = [] {
    std::array<double, 21> t{};
    double f = 1.0;
    t[0] = 0.0;
    for (int k = 1; k <= 20; ++k) {
      f *= k;
      t[k] = std::log(f);
    }
    return t;
  }();
  if (n <= 0) return 0.0;
  if (n <= 20) return table[static_cast<std::size_t>(n)];
  return std::lgamma(n + 1.0);
}

double hermite_laguerre_residual(int n, double x, double y) {
  double lhs = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    lhs += binom * hermite(2 * n - 2 * k, x) * hermite(2 * k, y);
    binom = binom * (n - k) / (k + 1.0);
  }
  const double rhs =
      std::pow(-4.0, n) * std::exp(log_factorial(n)) * laguerre(n, x * x + y * y);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

}  // namespace rdm::specfun
