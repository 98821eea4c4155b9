#include "rdmgen/closedform.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <string>

#include "rdmgen/io.hpp"
#include "rdmgen/specfun.hpp"

namespace rdm {

using specfun::log_factorial;

std::string_view to_string(PnBranch branch) {
  switch (branch) {
    case PnBranch::Laguerre: return "laguerre";
    case PnBranch::PoissonLimit: return "poisson_limit";
    case PnBranch::HermiteSeries: return "hermite_series";
    case PnBranch::ResonantPoisson: return "resonant_poisson";
  }
  return "unknown";
}

namespace {

double poisson_pmf(double mean, int n) {
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mean) - mean - log_factorial(n));
}

}  // namespace

PnResult pn_poisson(cplx z, int n) {
  return {n, poisson_pmf(std::norm(z), n), PnBranch::PoissonLimit};
}

PnResult resonant_poisson(cplx zeta, int n) {
  return {n, poisson_pmf(std::norm(zeta), n), PnBranch::ResonantPoisson};
}

double mean_excitation(cplx z, double eta) { return std::norm(z) + eta; }

PnResult pn_laguerre(cplx z, double eta, int n) {
  if (eta < kPoissonSwitchEta) return pn_poisson(z, n);
  const double z2 = std::norm(z);
  const double r = eta / (1.0 + eta);
  const double x = -z2 / (eta * (1.0 + eta));
  // u_k = r^k L_k(x):
  // u_{k+1} = (r (2k+1-x) u_k - r^2 k u_{k-1}) / (k+1)
  double prev = 1.0;
  double cur = 1.0;
  if (n >= 1) cur = r * (1.0 - x);
  for (int k = 1; k < n; ++k) {
    const double next = (r * (2.0 * k + 1.0 - x) * cur - r * r * k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  const double u = (n == 0) ? 1.0 : cur;
  return {n, std::exp(-z2 / (1.0 + eta)) / (1.0 + eta) * u, PnBranch::Laguerre};
}

PnResult pn_hermite(cplx alpha1, double alpha2, double phi_i, cplx zeta, int n, int s_max) {
  const double a2phi = alpha2 * phi_i;
  if (std::abs(a2phi) < 1e-10) return resonant_poisson(zeta, n);

  const cplx radicand = a2phi * alpha1;
  const double c = std::abs(radicand);
  const cplx arg = zeta / (2.0 * std::sqrt(radicand));
  const double scale = std::sqrt(c);

  // h_k = c^{k/2} H_k(arg) / sqrt(k!) by the scaled Hermite recurrence
  //   h_{k+1} = (2 arg sqrt(c) h_k - 2 sqrt(k) c h_{k-1}) / sqrt(k+1),
  // finite even when arg blows up as alpha2 -> 0. The summand is
  // (-1)^s C(n+s, s) |h_{n+s}|^2. Its terms reach about e^{|zeta|^2} times
  // the result, so the sum runs in 50-digit arithmetic.
  using Real = boost::multiprecision::cpp_bin_float_50;
  const cplx zs = arg * scale;
  const Real zr = zs.real(), zi = zs.imag(), cc = c;
  Real prev_re = 0, prev_im = 0, cur_re = 1, cur_im = 0;
  int k = 0;
  auto advance = [&] {
    const Real a = sqrt(Real(k)) * 2 * cc;
    const Real b = sqrt(Real(k + 1));
    const Real next_re = (2 * (zr * cur_re - zi * cur_im) - a * prev_re) / b;
    const Real next_im = (2 * (zr * cur_im + zi * cur_re) - a * prev_im) / b;
    prev_re = cur_re;
    prev_im = cur_im;
    cur_re = next_re;
    cur_im = next_im;
    ++k;
  };
  while (k < n) advance();

  Real sum = 0;
  Real binom = 1;  // C(n+s, s)
  Real last = 0, before_last = 0;
  for (int s = 0;; ++s) {
    const Real term = binom * (cur_re * cur_re + cur_im * cur_im);
    sum += (s % 2 == 0) ? term : Real(-term);
    before_last = last;
    last = term;
    const Real tail = last > before_last ? last : before_last;
    if (s >= 2 && tail < 1e-20 * (abs(sum) > 1 ? abs(sum) : Real(1))) break;
    if (s == s_max) {
      if (tail > 1e-12 * (abs(sum) > 1e-6 ? abs(sum) : Real(1e-6)))
        throw Error(ErrorCode::SeriesNotConverged, "hermite series tail " +
                                                       format_double(static_cast<double>(last)) +
                                                       " at s_max=" + std::to_string(s_max));
      break;
    }
    advance();
    binom = binom * (n + s + 1) / (s + 1);
  }
  return {n, static_cast<double>(sum), PnBranch::HermiteSeries};
}

ZetaSinusoidal zeta_sinusoidal(double k0, double nu, double omega0, double phi_i, double t) {
  if (std::abs(nu - omega0) < 1e-9)
    throw Error(ErrorCode::ResonantDrive, "closed form is singular at nu = omega0");
  const cplx i{0.0, 1.0};
  const double w = omega0;
  ZetaSinusoidal z;
  z.zeta1 = k0 * (nu * std::exp(-i * w * t) - nu * std::cos(nu * t) + i * w * std::sin(nu * t)) /
            (nu * nu - w * w);
  z.zeta2 = cplx{k0 * (w * std::sin(nu * t) - nu * std::sin(w * t)) / (w * (w * w - nu * nu)), 0.0};
  z.zeta = z.zeta1 - 2.0 * phi_i * z.zeta2;
  return z;
}

LargeTimeLimits large_time_limits(double k0, double nu, double omega0, double chi0,
                                  std::span<const BathMode> modes, double beta) {
  LargeTimeLimits out;
  const double num = k0 * k0 * (8.0 * nu * nu + 2.0 * (chi0 * chi0 + 4.0 * omega0 * omega0));
  const double d = 4.0 * nu * nu + chi0 * chi0 - 4.0 * omega0 * omega0;
  out.z2 = num / (d * d + 16.0 * chi0 * chi0 * omega0 * omega0);
  for (const auto& m : modes) {
    const double w = omega0 + m.omega;
    out.eta_inf += 4.0 * std::norm(m.f) / (chi0 * chi0 + 4.0 * w * w) * bose_occupation(beta, m.omega);
  }
  return out;
}

}  // namespace rdm
