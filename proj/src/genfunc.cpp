#include "rdmgen/genfunc.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rdmgen/io.hpp"
#include "rdmgen/specfun.hpp"

namespace rdm {

namespace {

using Eigen::MatrixXcd;
using specfun::log_factorial;

constexpr cplx kI{0.0, 1.0};

// sqrt(C(p, k)) for 0 <= k <= p <= order.
Eigen::MatrixXd sqrt_binomials(int order) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(order + 1, order + 1);
  for (int p = 0; p <= order; ++p)
    for (int k = 0; k <= p; ++k)
      t(p, k) = std::exp(0.5 * (log_factorial(p) - log_factorial(k) - log_factorial(p - k)));
  return t;
}

// Scaled Taylor coefficients e_k sqrt(k!) of exp(a x^power), power in {1, 2}.
std::vector<cplx> scaled_exp_monomial(cplx a, int power, int order) {
  std::vector<cplx> e(static_cast<std::size_t>(order) + 1, cplx{});
  e[0] = 1.0;
  if (power == 1) {
    for (int k = 1; k <= order; ++k) e[static_cast<std::size_t>(k)] = e[k - 1] * a / std::sqrt(double(k));
  } else {
    for (int k = 2; k <= order; k += 2) {
      const int j = k / 2;
      e[static_cast<std::size_t>(k)] = e[k - 2] * a * std::sqrt(double(k) * (k - 1)) / double(j);
    }
  }
  return e;
}

}  // namespace

BiSeries::BiSeries(int order) : order_(order), d_(MatrixXcd::Zero(order + 1, order + 1)) {
  d_(0, 0) = 1.0;
}

cplx BiSeries::coefficient(int p, int q) const {
  return d_(p, q) * std::exp(-0.5 * (log_factorial(p) + log_factorial(q)));
}

void BiSeries::multiply_exp_lambda(cplx a, int power) {
  if (a == cplx{}) return;
  const auto e = scaled_exp_monomial(a, power, order_);
  const auto sb = sqrt_binomials(order_);
  MatrixXcd out = MatrixXcd::Zero(order_ + 1, order_ + 1);
  for (int p = 0; p <= order_; ++p)
    for (int k = 0; k <= p; k += power)
      out.row(p) += (sb(p, k) * e[static_cast<std::size_t>(k)]) * d_.row(p - k);
  d_ = std::move(out);
}

void BiSeries::multiply_exp_lambdabar(cplx a, int power) {
  if (a == cplx{}) return;
  const auto e = scaled_exp_monomial(a, power, order_);
  const auto sb = sqrt_binomials(order_);
  MatrixXcd out = MatrixXcd::Zero(order_ + 1, order_ + 1);
  for (int q = 0; q <= order_; ++q)
    for (int k = 0; k <= q; k += power)
      out.col(q) += (sb(q, k) * e[static_cast<std::size_t>(k)]) * d_.col(q - k);
  d_ = std::move(out);
}

void BiSeries::multiply_exp_mixed(cplx a) {
  if (a == cplx{}) return;
  const auto sb = sqrt_binomials(order_);
  MatrixXcd out = MatrixXcd::Zero(order_ + 1, order_ + 1);
  for (int p = 0; p <= order_; ++p) {
    for (int q = 0; q <= order_; ++q) {
      cplx acc{};
      cplx ak{1.0};
      for (int k = 0; k <= std::min(p, q); ++k) {
        acc += ak * (sb(p, k) * sb(q, k)) * d_(p - k, q - k);
        ak *= a;
      }
      out(p, q) = acc;
    }
  }
  d_ = std::move(out);
}

BiSeries exp_quadratic(const QuadraticForm& q, int order, int max_order) {
  if (order < 0) throw Error(ErrorCode::OrderTooLarge, "series order must be >= 0");
  if (order > max_order)
    throw Error(ErrorCode::OrderTooLarge,
                "order " + std::to_string(order) + " exceeds ceiling " + std::to_string(max_order));
  BiSeries s(order);
  s.multiply_exp_mixed(q.q11);
  s.multiply_exp_lambda(q.q20, 2);
  s.multiply_exp_lambdabar(q.q02, 2);
  s.multiply_exp_lambda(q.l1, 1);
  s.multiply_exp_lambdabar(q.l2, 1);
  if (q.c0 != cplx{}) {
    const cplx scale = std::exp(q.c0);
    for (int p = 0; p <= order; ++p)
      for (int r = 0; r <= order; ++r) s.scaled(p, r) *= scale;
  }
  return s;
}

cplx rho_element(const BiSeries& series, int n, int m, int s_max) {
  if (n < 0 || m < 0 || s_max < 0 || m + s_max > series.order() || n + s_max > series.order())
    throw Error(ErrorCode::OrderTooLarge, "rho_element needs n, m + s_max <= series order");
  const double base = 0.5 * (log_factorial(m) + log_factorial(n));
  cplx sum{};
  double prev1 = 0.0, prev2 = 0.0, prev3 = 0.0;
  for (int s = 0; s <= s_max; ++s) {
    const double w =
        std::exp(0.5 * (log_factorial(m + s) + log_factorial(n + s)) - base - log_factorial(s));
    const cplx term = w * series.scaled(m + s, n + s);
    sum += term;
    const double cur = std::abs(term);
    // Early exit once two consecutive terms are negligible and still shrinking.
    // Floors are absolute near zero: the matrix is normalized to unit trace.
    const double floor = std::max(1e-14 * std::abs(sum), 1e-16);
    if (s >= 3 && cur < floor && prev1 < floor && cur + prev1 <= prev2 + prev3) break;
    if (s == s_max) {
      const double limit = std::max(1e-10 * std::abs(sum), 1e-13);
      if (cur > limit || prev1 > limit)
        throw Error(ErrorCode::TruncationNotConverged,
                    "rho(" + std::to_string(n) + "," + std::to_string(m) + ") last term " +
                        format_double(std::max(cur, prev1)) + " at s_max=" + std::to_string(s_max));
    }
    prev3 = prev2;
    prev2 = prev1;
    prev1 = cur;
  }
  return (n % 2 == 0) ? sum : -sum;
}

QuadraticForm build_exponent(const CoefficientSet& cs, std::size_t index, cplx gamma, double beta) {
  const cplx phi = cs.spec.phi;
  const cplx a1 = cs.alpha1[index];
  const double a2 = cs.alpha2[index].real();
  const cplx zeta = zeta_combined(cs, index);
  const ThermalQuadratic th = theta_quadratic(cs, index, beta);

  QuadraticForm q;
  q.l1 = kI * std::conj(zeta) + std::conj(gamma * a1) + 2.0 * kI * gamma * std::conj(phi) * a2;
  q.l2 = kI * zeta - gamma * a1 + 2.0 * kI * std::conj(gamma) * phi * a2;
  q.q11 = -4.0 * std::norm(phi) * a2 * a2 - th.a_mixed;
  q.q20 = kI * a2 * std::conj(phi * a1) + th.b_lam2;
  q.q02 = -kI * a2 * phi * a1 + th.c_lambar2;
  return q;
}

double ReducedDensityMatrix::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double ReducedDensityMatrix::min_eigenvalue() const {
  const MatrixXcd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double mean_occupation(const QuadraticForm& q) {
  return (-(q.q11 + q.l1 * q.l2) * std::exp(q.c0)).real();
}

int select_n_cut(const QuadraticForm& q, double tolerance, int cap) {
  // Displacement feeds a Poisson envelope; thermal and squeezing weight
  // feeds a geometric one.
  const double spread = std::max(0.0, -q.q11.real()) + std::abs(q.q20) + std::abs(q.q02);
  const double mean = std::max(0.0, mean_occupation(q)) + spread;
  if (mean == 0.0) return 0;
  const double ratio = spread / (1.0 + spread);
  double pmf = std::exp(-mean);
  double cdf = pmf;
  for (int n = 0; n < cap; ++n) {
    const double poisson_tail = std::max(0.0, 1.0 - cdf);
    const double geometric_tail = std::pow(ratio, n + 1);
    if (std::max(poisson_tail, geometric_tail) < tolerance) return n;
    pmf *= mean / (n + 1.0);
    cdf += pmf;
  }
  return cap;
}

std::string_view to_string(RhoMethod method) {
  switch (method) {
    case RhoMethod::Auto: return "auto";
    case RhoMethod::Contraction: return "contraction";
    case RhoMethod::Resummed: return "resummed";
  }
  return "?";
}

QuadraticForm contract_normal_order(const QuadraticForm& q) {
  using Eigen::Matrix2cd;
  using Eigen::Vector2cd;
  Matrix2cd a;
  a << 2.0 * q.q20, q.q11, q.q11, 2.0 * q.q02;
  Matrix2cd k;
  k << 0.0, 1.0, 1.0, 0.0;
  const Matrix2cd i_ka = Matrix2cd::Identity() - k * a;
  const cplx det = i_ka.determinant();
  if (std::abs(det) < 1e-14)
    throw Error(ErrorCode::SeriesNotConverged, "normal-order contraction is singular (det(I - K A) = 0)");
  const Matrix2cd m = i_ka.inverse();
  const Vector2cd b(q.l1, q.l2);
  const Matrix2cd ap = a * m;
  const Vector2cd bp = m.transpose() * b;

  QuadraticForm out;
  out.c0 = q.c0 + 0.5 * (b.transpose() * m * k * b)(0, 0) - 0.5 * std::log(det);
  out.l1 = bp(0);
  out.l2 = bp(1);
  out.q20 = 0.5 * ap(0, 0);
  out.q02 = 0.5 * ap(1, 1);
  out.q11 = 0.5 * (ap(0, 1) + ap(1, 0));
  return out;
}

namespace {

// The contraction sum diverges once the thermal weight reaches one, and its
// rounding error grows like e^{2 (mean + spread)}: about 1e-14 at 3.
bool contraction_well_conditioned(const QuadraticForm& q) {
  const double spread = std::max(0.0, -q.q11.real()) + std::abs(q.q20) + std::abs(q.q02);
  return spread < 0.5 && std::max(0.0, mean_occupation(q)) + spread < 3.0;
}

void fill_contraction(const QuadraticForm& q, int n_cut, int& s_max, bool auto_s, int max_order,
                      MatrixXcd& rho) {
  for (;;) {
    try {
      const BiSeries series = exp_quadratic(q, n_cut + s_max, max_order);
      for (int n = 0; n <= n_cut; ++n)
        for (int m = 0; m <= n_cut; ++m) rho(n, m) = rho_element(series, n, m, s_max);
      return;
    } catch (const Error& e) {
      // Thermal broadening slows the sum; lengthen it while the order ceiling allows.
      if (!auto_s || e.code() != ErrorCode::TruncationNotConverged || n_cut + 2 * s_max > max_order) throw;
      s_max *= 2;
    }
  }
}

void fill_resummed(const QuadraticForm& q, int n_cut, int max_order, MatrixXcd& rho) {
  const BiSeries series = exp_quadratic(contract_normal_order(q), n_cut, max_order);
  for (int n = 0; n <= n_cut; ++n)
    for (int m = 0; m <= n_cut; ++m) rho(n, m) = (n % 2 == 0) ? series.scaled(m, n) : -series.scaled(m, n);
}

}  // namespace

ReducedDensityMatrix rho_from_exponent(const QuadraticForm& q, double t, const RhoOptions& options) {
  const bool auto_cut = options.n_cut < 0;
  int n_cut = auto_cut ? std::max(options.min_n_cut, select_n_cut(q, options.tail_tolerance, options.max_n_cut))
                       : options.n_cut;
  RhoMethod method = options.method;
  if (method == RhoMethod::Auto)
    method = contraction_well_conditioned(q) ? RhoMethod::Contraction : RhoMethod::Resummed;
  const bool auto_s = options.s_max < 0;
  int s_max = auto_s ? n_cut + 24 : options.s_max;
  for (;;) {
    ReducedDensityMatrix out;
    out.t = t;
    out.n_cut = n_cut;
    out.method = method;
    out.rho = MatrixXcd::Zero(n_cut + 1, n_cut + 1);
    if (method == RhoMethod::Contraction) {
      fill_contraction(q, n_cut, s_max, auto_s, options.max_order, out.rho);
      out.truncation_order = s_max;
    } else {
      fill_resummed(q, n_cut, options.max_order, out.rho);
    }
    out.trace_deficit = 1.0 - out.rho.trace().real();

    // The tail rule is an envelope estimate; widen when the actual deficit
    // says otherwise (squeezed states have heavier tails).
    if (!auto_cut || out.trace_deficit < options.tail_tolerance || n_cut >= options.max_n_cut)
      return out;
    n_cut = std::min(options.max_n_cut, n_cut + 4);
    if (auto_s) s_max = std::max(s_max, n_cut + 24);
  }
}

ReducedDensityMatrix rho_matrix(const CoefficientSet& cs, std::size_t index, cplx gamma,
                                const RhoOptions& options) {
  return rho_from_exponent(build_exponent(cs, index, gamma, cs.spec.beta), cs.grid[index], options);
}

ReducedDensityMatrix rho_matrix(const SystemSpec& spec, cplx gamma, double t, const RhoOptions& options) {
  const SystemSpec valid = validate_spec(spec);
  std::vector<double> grid{0.0};
  if (t > 0.0) grid.push_back(t);
  const CoefficientSet cs = propagate(valid, grid);
  return rho_matrix(cs, cs.size() - 1, gamma, options);
}

}  // namespace rdm
