#pragma once

#include <Eigen/Dense>
#include <span>
#include <string_view>

#include "rdmgen/coefficients.hpp"
#include "rdmgen/model.hpp"

// Generating-function calculus for reduced density-matrix elements.
//
// The normal characteristic function chi(l, lb) = Tr{e^{l a^+(t)} e^{-lb a(t)} rho(0)}
// of a coherent-times-thermal initial state is the exponential of a quadratic
// form in the formal variables (l, lb). Writing c_pq for the coefficient of
// l^p lb^q in that exponential,
//
//   rho_nm(t) = (-1)^n / sqrt(m! n!) * sum_s (m+s)! (n+s)! / s! * c_{m+s, n+s},
//
// which is the contraction e^{d_l d_lb} followed by d_l^m d_lb^n at l = lb = 0.
namespace rdm {

struct QuadraticForm {
  cplx c0{};
  cplx l1{};   // lambda
  cplx l2{};   // lambdabar
  cplx q20{};  // lambda^2
  cplx q02{};  // lambdabar^2
  cplx q11{};  // lambda * lambdabar

  cplx operator()(cplx lam, cplx lambar) const {
    return c0 + l1 * lam + l2 * lambar + q20 * lam * lam + q02 * lambar * lambar + q11 * lam * lambar;
  }
};

// Truncated bivariate series in (lambda, lambdabar) with factorial-scaled
// storage: scaled(p, q) = c_pq * sqrt(p! q!). For Gaussian exponents the
// scaled entries stay O(1) where the raw c_pq underflow and the extraction
// weights (m+s)!(n+s)! overflow.
class BiSeries {
 public:
  BiSeries() = default;
  explicit BiSeries(int order);

  int order() const { return order_; }
  cplx scaled(int p, int q) const { return d_(p, q); }
  cplx& scaled(int p, int q) { return d_(p, q); }
  // Raw Taylor coefficient c_pq (may underflow for large p, q).
  cplx coefficient(int p, int q) const;

  const Eigen::MatrixXcd& data() const { return d_; }

  // In-place product with exp(a * lambda^k) or exp(a * lambdabar^k), k in {1, 2},
  // and with exp(a * lambda * lambdabar).
  void multiply_exp_lambda(cplx a, int power);
  void multiply_exp_lambdabar(cplx a, int power);
  void multiply_exp_mixed(cplx a);

 private:
  int order_ = 0;
  Eigen::MatrixXcd d_;
};

inline constexpr int kDefaultMaxOrder = 64;

// Taylor coefficients of exp(q) through degree `order` in each variable.
// Factors are multiplied in the fixed order (lambda lambdabar, lambda^2,
// lambdabar^2, lambda, lambdabar, constant). Throws OrderTooLarge above
// `max_order`.
BiSeries exp_quadratic(const QuadraticForm& q, int order, int max_order = kDefaultMaxOrder);

// Sum over s <= s_max of the contraction above. Requires m + s_max and
// n + s_max <= series.order(). Throws TruncationNotConverged when the last
// retained terms are not negligible.
cplx rho_element(const BiSeries& series, int n, int m, int s_max);

// Exponent of the generating function for a coherent initial state |gamma>
// and a thermal bath at inverse temperature beta:
//   l1  = i conj(zeta) + conj(gamma alpha1) + 2i gamma conj(phi) alpha2
//   l2  = i zeta - gamma alpha1 + 2i conj(gamma) phi alpha2
//   q11 = -4|phi|^2 alpha2^2 - a_mixed
//   q20 = i alpha2 conj(phi alpha1) + b_lam2
//   q02 = -i alpha2 phi alpha1 + c_lambar2
QuadraticForm build_exponent(const CoefficientSet& cs, std::size_t index, cplx gamma, double beta);

// The contraction e^{d_l d_lb} applied to exp(q) in closed form. Writing
// q = c0 + b.v + v.A.v/2 with v = (l, lb) and K the swap matrix,
//   e^{d_l d_lb} exp(q) = det(I - K A)^{-1/2} exp(c0 + b.M K b/2 + b.M v + v.A M v/2),
// M = (I - K A)^{-1}. The Taylor coefficients of the result are the matrix
// elements themselves, so no alternating sum is needed. Throws
// SeriesNotConverged when det(I - K A) vanishes.
QuadraticForm contract_normal_order(const QuadraticForm& q);

// Contraction: the s-sum of rho_element. Resummed: coefficients of
// contract_normal_order(q). Auto uses the sum while its terms stay within a
// few orders of the result and the resummed form otherwise (large
// displacements, or thermal broadening at which the sum diverges).
enum class RhoMethod { Auto, Contraction, Resummed };

std::string_view to_string(RhoMethod method);

struct ReducedDensityMatrix {
  double t = 0.0;
  int n_cut = 0;
  Eigen::MatrixXcd rho;
  double trace_deficit = 0.0;
  int truncation_order = 0;  // s_max used; 0 for the resummed method
  RhoMethod method = RhoMethod::Contraction;

  double hermiticity_defect() const;
  double min_eigenvalue() const;
};

struct RhoOptions {
  int n_cut = -1;   // < 0: choose by the tail rule
  int min_n_cut = 0;  // floor for the tail rule
  int s_max = -1;   // < 0: n_cut + 24
  int max_order = 256;
  double tail_tolerance = 1e-8;
  int max_n_cut = 128;
  RhoMethod method = RhoMethod::Auto;
};

// Smallest n_cut whose excitation tail is below tolerance, estimated as the
// larger of a Poisson tail at the mean occupation and a geometric tail set by
// the thermal and squeezing coefficients. rho_from_exponent widens further
// if the realized trace deficit disagrees.
int select_n_cut(const QuadraticForm& q, double tolerance = 1e-8, int cap = 128);

// <a^+ a> implied by a normal characteristic exponent.
double mean_occupation(const QuadraticForm& q);

ReducedDensityMatrix rho_from_exponent(const QuadraticForm& q, double t, const RhoOptions& options = {});

ReducedDensityMatrix rho_matrix(const CoefficientSet& cs, std::size_t index, cplx gamma,
                                const RhoOptions& options = {});

// Convenience: propagates coefficients on {0, t} for a validated spec.
ReducedDensityMatrix rho_matrix(const SystemSpec& spec, cplx gamma, double t,
                                const RhoOptions& options = {});

}  // namespace rdm
