#pragma once

#include <complex>
#include <span>
#include <string_view>

#include "rdmgen/model.hpp"

namespace rdm {

enum class PnBranch { Laguerre, PoissonLimit, HermiteSeries, ResonantPoisson };

std::string_view to_string(PnBranch branch);

struct PnResult {
  int n = 0;
  double p = 0.0;
  PnBranch branch = PnBranch::Laguerre;
};

// Below this eta the Laguerre law is replaced by its Poisson limit.
inline constexpr double kPoissonSwitchEta = 1e-8;

// Excitation distribution at phi = 0 for displacement Z and thermal
// broadening eta:
//   P_n = exp(-|Z|^2/(1+eta)) / (1+eta) * (eta/(1+eta))^n * L_n(-|Z|^2 / (eta (1+eta))).
// The power and the polynomial are advanced together so intermediates stay
// bounded.
PnResult pn_laguerre(cplx z, double eta, int n);

// |Z|^2 + eta
double mean_excitation(cplx z, double eta);

// |Z|^{2n} e^{-|Z|^2} / n!, evaluated in log space.
PnResult pn_poisson(cplx z, int n);

// Poisson law with mean |zeta|^2.
PnResult resonant_poisson(cplx zeta, int n);

// Strong-drive, dissipationless excitation series for the ground state,
// with the phi_I^2 part of the exponent dropped:
//   P_n = c^n / n! sum_s (-c)^s / s! |H_{n+s}(zeta / (2 sqrt(alpha2 phi_I alpha1)))|^2,
//   c = |alpha2 phi_I alpha1|.
// Near alpha2 = 0 (|alpha2 phi_I| < 1e-10) returns resonant_poisson(zeta).
// Throws SeriesNotConverged if the tail at s_max is not negligible.
PnResult pn_hermite(cplx alpha1, double alpha2, double phi_i, cplx zeta, int n, int s_max = 400);

struct ZetaSinusoidal {
  cplx zeta1;
  cplx zeta2;
  cplx zeta;  // zeta1 - 2 phi_I zeta2
};

// Undamped response to k(t) = k0 sin(nu t) with alpha1 = e^{-i w t},
// alpha2 = sin(w t)/w. Throws ResonantDrive when |nu - omega0| < 1e-9.
ZetaSinusoidal zeta_sinusoidal(double k0, double nu, double omega0, double phi_i, double t);

struct LargeTimeLimits {
  double z2 = 0.0;       // time-averaged |zeta1|^2
  double eta_inf = 0.0;
};

// Late-time (t >> 1/chi0) values for a memoryless bath and sinusoidal drive
// at phi = 0. `modes` supplies the thermal occupations entering eta.
LargeTimeLimits large_time_limits(double k0, double nu, double omega0, double chi0,
                                  std::span<const BathMode> modes, double beta);

}  // namespace rdm
