#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rdmgen/model.hpp"

// Heisenberg-picture coefficient functions of the driven quadratic mode.
//
// With the initial-time operators a, a^+, b_j, b_j^+,
//
//   a(t) = alpha1 a - 2i phi alpha2 a^+ - i sum_j M_j b_j
//          + 2 phi sum_j N_j b_j^+ - i zeta,      zeta = zeta1 + 2i phi zeta2,
//
// where alpha1, alpha2 have Laplace transforms conj-G/L and 1/L with
// G(s) = s + i omega0 + chi(s), L = G conj-G - 4|phi|^2. The kernels carrying
// the bath phase are
//
//   M_j(t) = f_j    int_0^t e^{-i w_j (t-t')} alpha1(t') dt'
//   N_j(t) = conj f_j int_0^t e^{+i w_j (t-t')} alpha2(t') dt'
//   zeta1(t) = int_0^t alpha1(t-t') k(t') dt',  zeta2(t) = int_0^t alpha2(t-t') conj k(t') dt'.
//
// alpha2 is real. Everything is obtained by propagating the closed linear
// system of the ladder operators with matrix exponentials; no eigen-
// decomposition is involved, so a bath mode resonant with omega0 needs no
// special handling.
namespace rdm {

// d/dt (a, a^+, b_1, b_1^+, ...)^T = A (...)^T + d(t),
// d(t) = (-i k(t), +i conj k(t), 0, ..., 0)^T.
struct LinearGenerator {
  Eigen::MatrixXcd a;

  Eigen::Index dimension() const { return a.rows(); }
  Eigen::VectorXcd injection(cplx k) const;
};

// Discrete or absent bath only; throws Unsupported for the memoryless bath.
LinearGenerator assemble_generator(const SystemSpec& spec);

// Bath response function chi(dt) = sum_j |f_j|^2 e^{-i w_j dt}.
// Throws Unsupported for the memoryless bath (a delta has no pointwise value).
cplx response_function(const BathSpec& bath, double dt);

struct CoefficientSet {
  std::vector<double> grid;
  std::vector<cplx> alpha1;
  std::vector<cplx> alpha2;
  std::vector<cplx> zeta1;
  std::vector<cplx> zeta2;
  Eigen::MatrixXcd m_coef;  // rows: grid points, columns: bath modes
  Eigen::MatrixXcd n_coef;
  SystemSpec spec;

  std::size_t size() const { return grid.size(); }
  std::size_t modes() const { return static_cast<std::size_t>(m_coef.cols()); }
};

// Bath-side coefficients, written as direct coefficients of the expansion
//   b_j(t) = sum_k [Lambda_jk b_k + Lambda'_jk b_k^+] + Gamma_j a + Gamma'_j a^+ + Omega_j.
struct BathCoefficientSet {
  std::vector<double> grid;
  std::vector<Eigen::MatrixXcd> lambda;        // one N x N matrix per grid point
  std::vector<Eigen::MatrixXcd> lambda_prime;
  Eigen::MatrixXcd gamma;                      // rows: grid points, columns: modes
  Eigen::MatrixXcd gamma_prime;
  Eigen::MatrixXcd omega;
};

struct PropagateOptions {
  double defect_tolerance = 1e-9;
  double max_substep = 0.5;  // initial internal step cap, refined on defect failure
  int max_refinements = 6;
};

// Grid must start at 0 and be strictly increasing (BadGrid otherwise).
// Throws StepSizeTooCoarse when the commutator defect cannot be held below
// tolerance. Memoryless baths use the 2x2 system with complex frequency
// omega0 - i chi0/2; M and N are then empty.
CoefficientSet propagate(const SystemSpec& spec, std::span<const double> grid,
                         const PropagateOptions& options = {});

BathCoefficientSet bath_coefficients(const SystemSpec& spec, std::span<const double> grid,
                                     const PropagateOptions& options = {});

// Fundamental matrix exp(A t) of the homogeneous ladder-operator system.
Eigen::MatrixXcd fundamental_matrix(const SystemSpec& spec, double t);

// max |S J S^+ - J| with J = diag(+1, -1, +1, -1, ...).
double symplectic_defect(const Eigen::MatrixXcd& s);

// (alpha1, alpha2) in closed form for no bath or a memoryless bath with the
// 4 phi_I^2 term of L(s) dropped. Throws Unsupported for a discrete bath.
std::pair<cplx, cplx> closed_form_alpha(const SystemSpec& spec, double t);

// | |alpha1|^2 - 4|phi|^2 alpha2^2 + sum_j (|M_j|^2 - 4|phi|^2 |N_j|^2) - 1 |
double commutator_defect(const CoefficientSet& cs, std::size_t index);

// eta(t) = sum_k |M_k|^2 n_B(w_k).
double eta(const CoefficientSet& cs, std::size_t index, double beta);

// Thermal part of the generating-function exponent:
//   -a_mixed lambda lambdabar + b_lam2 lambda^2 + c_lambar2 lambdabar^2.
struct ThermalQuadratic {
  double a_mixed = 0.0;
  cplx b_lam2{};
  cplx c_lambar2{};
  double beta = kInf;
  double t = 0.0;
};

// a_mixed = sum_k [ n_k (|M_k|^2 + 4|phi|^2 |N_k|^2) + 4|phi|^2 |N_k|^2 ]
// b_lam2  =  i sum_k (2 n_k + 1) conj(phi) conj(N_k) conj(M_k)
// c_lambar2 = -i sum_k (2 n_k + 1) phi N_k M_k
ThermalQuadratic theta_quadratic(const CoefficientSet& cs, std::size_t index, double beta);

// Z = -i zeta1 + gamma alpha1 (the phi = 0 displacement).
cplx big_z(const CoefficientSet& cs, std::size_t index, cplx gamma);

// zeta1 + 2i phi zeta2.
cplx zeta_combined(const CoefficientSet& cs, std::size_t index);

// Header row then one row per grid point: t, Re/Im of alpha1, alpha2,
// zeta1, zeta2, then Re/Im of M_j, N_j per mode. 17 significant digits.
void write_coefficients_csv(std::ostream& os, const CoefficientSet& cs);

}  // namespace rdm
