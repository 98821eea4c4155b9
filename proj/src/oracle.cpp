#include "rdmgen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdmgen/io.hpp"
#include "rdmgen/specfun.hpp"

namespace rdm::oracle {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

constexpr cplx kI{0.0, 1.0};

// Mixed-radix view of the tensor-product basis.
struct Basis {
  std::vector<int> dims;
  std::vector<Index> stride;
  Index size = 1;

  explicit Basis(std::vector<int> d) : dims(std::move(d)), stride(dims.size(), 1) {
    for (std::size_t i = dims.size(); i-- > 0;) {
      stride[i] = size;
      size *= dims[i];
    }
  }
  int level(Index index, std::size_t factor) const {
    return static_cast<int>((index / stride[factor]) % dims[factor]);
  }
};

struct Operators {
  SpMat h0;    // time-independent part
  SpMat a;     // system annihilation
  SpMat adag;
};

void check_plan(const SystemSpec& spec, const CutoffPlan& plan) {
  if (is_memoryless(spec.bath))
    throw Error(ErrorCode::Unsupported, "the Fock-space oracle needs a discrete bath");
  if (plan.n_sys < 1) throw Error(ErrorCode::DimensionCeiling, "n_sys must be >= 1");
  if (plan.n_bath.size() != bath_modes(spec.bath).size())
    throw Error(ErrorCode::DimensionCeiling, "need one bath cutoff per discrete mode");
  for (int nb : plan.n_bath)
    if (nb < 1) throw Error(ErrorCode::DimensionCeiling, "bath cutoffs must be >= 1");
  if (plan.dimension() > plan.max_dimension)
    throw Error(ErrorCode::DimensionCeiling, "dimension " + std::to_string(plan.dimension()) +
                                                 " exceeds ceiling " + std::to_string(plan.max_dimension));
}

Operators build_operators(const SystemSpec& spec, const CutoffPlan& plan) {
  check_plan(spec, plan);
  const Basis basis(plan.dims());
  const auto modes = bath_modes(spec.bath);
  std::vector<Triplet> h, a;
  const Index dim = basis.size;
  for (Index col = 0; col < dim; ++col) {
    const int ns = basis.level(col, 0);
    double diag = spec.omega0 * (ns + 0.5);
    for (std::size_t j = 0; j < modes.size(); ++j) diag += modes[j].omega * basis.level(col, j + 1);
    h.emplace_back(col, col, diag);

    if (ns >= 1) a.emplace_back(col - basis.stride[0], col, std::sqrt(double(ns)));
    // conj(phi) a^2 + phi a^+2
    if (ns >= 2)
      h.emplace_back(col - 2 * basis.stride[0], col, std::conj(spec.phi) * std::sqrt(double(ns) * (ns - 1)));
    if (ns + 2 <= plan.n_sys)
      h.emplace_back(col + 2 * basis.stride[0], col, spec.phi * std::sqrt((ns + 1.0) * (ns + 2.0)));
    // f_j a^+ b_j + conj(f_j) b_j^+ a
    for (std::size_t j = 0; j < modes.size(); ++j) {
      const int nb = basis.level(col, j + 1);
      const Index sb = basis.stride[j + 1];
      if (nb >= 1 && ns + 1 <= plan.n_sys)
        h.emplace_back(col + basis.stride[0] - sb, col, modes[j].f * std::sqrt((ns + 1.0) * nb));
      if (ns >= 1 && nb + 1 <= plan.n_bath[j])
        h.emplace_back(col - basis.stride[0] + sb, col, std::conj(modes[j].f) * std::sqrt(ns * (nb + 1.0)));
    }
  }
  Operators ops;
  ops.h0.resize(dim, dim);
  ops.h0.setFromTriplets(h.begin(), h.end());
  ops.a.resize(dim, dim);
  ops.a.setFromTriplets(a.begin(), a.end());
  ops.adag = ops.a.adjoint();
  return ops;
}

double max_drive(const DriveSpec& drive) {
  if (const auto* s = std::get_if<SinusoidalDrive>(&drive)) return std::abs(s->k0);
  if (const auto* tab = std::get_if<TabulatedDrive>(&drive)) {
    double m = 0.0;
    for (cplx k : tab->k) m = std::max(m, std::abs(k));
    return m;
  }
  return 0.0;
}

double one_norm(const SpMat& m) {
  double best = 0.0;
  for (Index c = 0; c < m.outerSize(); ++c) {
    double acc = 0.0;
    for (SpMat::InnerIterator it(m, c); it; ++it) acc += std::abs(it.value());
    best = std::max(best, acc);
  }
  return best;
}

// exp(-i h H) psi by Taylor series; h ||H||_1 is kept <= 0.5 by substepping.
void apply_exponential(const SpMat& hmat, double h, double hnorm, MatrixXcd& psi) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(h) * hnorm / 0.5)));
  const double hs = h / pieces;
  for (int p = 0; p < pieces; ++p) {
    MatrixXcd term = psi;
    MatrixXcd acc = psi;
    const double scale = std::max(psi.norm(), 1e-300);
    for (int k = 1; k <= 60; ++k) {
      term = (hmat * term) * (-kI * hs / double(k));
      acc += term;
      if (term.norm() < 1e-17 * scale) break;
    }
    psi = std::move(acc);
  }
}

// Factor rho = F F^+ from its spectral decomposition.
MatrixXcd factorize(const MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho + rho.adjoint()));
  const auto& w = es.eigenvalues();
  const double cutoff = 1e-16 * std::max(w.maxCoeff(), 1e-300);
  std::vector<Index> keep;
  for (Index i = 0; i < w.size(); ++i)
    if (w(i) > cutoff) keep.push_back(i);
  MatrixXcd f(rho.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    f.col(static_cast<Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(w(keep[c]));
  return f;
}

ReducedDensityMatrix reduce_factor(const MatrixXcd& f, const std::vector<int>& dims, double t) {
  const Index ds = dims.front();
  const Index rest = f.rows() / ds;
  ReducedDensityMatrix out;
  out.t = t;
  out.n_cut = static_cast<int>(ds) - 1;
  out.rho = MatrixXcd::Zero(ds, ds);
  for (Index n = 0; n < ds; ++n)
    for (Index m = 0; m < ds; ++m)
      out.rho(n, m) = (f.middleRows(n * rest, rest).array() * f.middleRows(m * rest, rest).conjugate().array()).sum();
  out.trace_deficit = 1.0 - out.rho.trace().real();
  return out;
}

// Fixed-step run; returns rho_S at each time and the final factor.
std::vector<ReducedDensityMatrix> run(const SystemSpec& spec, const Operators& ops, const std::vector<int>& dims,
                                      MatrixXcd psi, std::span<const double> times, double dt,
                                      MatrixXcd* final_factor) {
  const double s3 = std::sqrt(3.0);
  const double c1 = 0.5 - s3 / 6.0, c2 = 0.5 + s3 / 6.0;
  const double w_early = 0.25 + s3 / 6.0, w_late = 0.25 - s3 / 6.0;
  const double norm0 = one_norm(ops.h0), norm_a = one_norm(ops.a);
  const bool driven = !std::holds_alternative<ZeroDrive>(spec.drive);

  std::vector<ReducedDensityMatrix> out;
  double t = 0.0;
  for (double target : times) {
    const int steps = static_cast<int>(std::ceil((target - t) / dt - 1e-9));
    const double h = steps > 0 ? (target - t) / steps : 0.0;
    for (int s = 0; s < steps; ++s) {
      const double t0 = t + s * h;
      const cplx k1 = driven ? drive_eval(spec.drive, t0 + c1 * h) : cplx{};
      const cplx k2 = driven ? drive_eval(spec.drive, t0 + c2 * h) : cplx{};
      // Each exponent averages H at the two Gauss points with weights summing to 1/2.
      for (const auto& [wa, wb] : {std::pair{w_early, w_late}, std::pair{w_late, w_early}}) {
        const cplx kappa = wa * k1 + wb * k2;
        SpMat hs = 0.5 * ops.h0;
        if (kappa != cplx{}) hs += kappa * ops.adag + std::conj(kappa) * ops.a;
        const double bound = 0.5 * norm0 + 2.0 * std::abs(kappa) * norm_a;
        apply_exponential(hs, h, bound, psi);
      }
    }
    t = target;
    out.push_back(reduce_factor(psi, dims, t));
  }
  if (final_factor) *final_factor = std::move(psi);
  return out;
}

double max_change(const std::vector<ReducedDensityMatrix>& a, const std::vector<ReducedDensityMatrix>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, (a[i].rho - b[i].rho).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

std::size_t CutoffPlan::dimension() const {
  std::size_t d = static_cast<std::size_t>(std::max(n_sys, 0)) + 1;
  for (int nb : n_bath) d *= static_cast<std::size_t>(std::max(nb, 0)) + 1;
  return d;
}

std::vector<int> CutoffPlan::dims() const {
  std::vector<int> d{n_sys + 1};
  for (int nb : n_bath) d.push_back(nb + 1);
  return d;
}

double FullState::hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double FullState::trace_defect() const { return std::abs(rho.trace() - cplx{1.0}); }

double FullState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXcd build_hamiltonian(const SystemSpec& spec, const CutoffPlan& plan, double t) {
  const Operators ops = build_operators(spec, plan);
  const cplx k = drive_eval(spec.drive, t);
  SpMat h = ops.h0;
  if (k != cplx{}) h += k * ops.adag + std::conj(k) * ops.a;
  return MatrixXcd(h);
}

Eigen::MatrixXcd thermal_bath_state(const SystemSpec& spec, const CutoffPlan& plan) {
  check_plan(spec, plan);
  const auto modes = bath_modes(spec.bath);
  MatrixXcd state = MatrixXcd::Ones(1, 1);
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const int nb = plan.n_bath[j];
    VectorXcd pops = VectorXcd::Zero(nb + 1);
    if (std::isinf(spec.beta)) {
      pops(0) = 1.0;
    } else {
      const double x = spec.beta * modes[j].omega;
      const double tail = std::exp(-x * (nb + 1));
      if (tail > plan.thermal_tail_tolerance)
        throw Error(ErrorCode::CutoffTooSmallForTemperature,
                    "mode " + std::to_string(j) + ": discarded thermal weight " + format_double(tail) +
                        " > " + format_double(plan.thermal_tail_tolerance));
      double z = 0.0;
      for (int n = 0; n <= nb; ++n) z += std::exp(-x * n);
      for (int n = 0; n <= nb; ++n) pops(n) = std::exp(-x * n) / z;
    }
    const MatrixXcd factor = pops.asDiagonal();
    MatrixXcd next(state.rows() * factor.rows(), state.cols() * factor.cols());
    for (Index r = 0; r < state.rows(); ++r)
      for (Index c = 0; c < state.cols(); ++c)
        next.block(r * factor.rows(), c * factor.cols(), factor.rows(), factor.cols()) = state(r, c) * factor;
    state = std::move(next);
  }
  return state;
}

Eigen::VectorXcd coherent_amplitudes(cplx gamma, int n_cut) {
  VectorXcd v(n_cut + 1);
  cplx amp = std::exp(-0.5 * std::norm(gamma));
  for (int n = 0; n <= n_cut; ++n) {
    v(n) = amp;
    amp *= gamma / std::sqrt(n + 1.0);
  }
  return v / v.norm();
}

FullState initial_state(const SystemSpec& spec, const CutoffPlan& plan, cplx gamma) {
  const VectorXcd psi = coherent_amplitudes(gamma, plan.n_sys);
  const MatrixXcd sys = psi * psi.adjoint();
  const MatrixXcd bath = thermal_bath_state(spec, plan);
  FullState st;
  st.dims = plan.dims();
  st.rho.resize(sys.rows() * bath.rows(), sys.cols() * bath.cols());
  for (Index r = 0; r < sys.rows(); ++r)
    for (Index c = 0; c < sys.cols(); ++c)
      st.rho.block(r * bath.rows(), c * bath.cols(), bath.rows(), bath.cols()) = sys(r, c) * bath;
  return st;
}

std::vector<ReducedDensityMatrix> evolve_reduced(const SystemSpec& spec, const CutoffPlan& plan,
                                                 const FullState& rho0, std::span<const double> times,
                                                 const EvolveOptions& options, EvolveReport* report) {
  const Operators ops = build_operators(spec, plan);
  if (static_cast<std::size_t>(rho0.rho.rows()) != plan.dimension())
    throw Error(ErrorCode::DimensionCeiling, "initial state does not match the cutoff plan");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0.0 || (i && times[i] < times[i - 1]))
      throw Error(ErrorCode::BadGrid, "oracle times must be ascending and >= 0");

  const MatrixXcd factor = factorize(rho0.rho);
  double dt = plan.dt;
  if (dt <= 0.0) {
    const double bound = one_norm(ops.h0) + 2.0 * max_drive(spec.drive) * one_norm(ops.a);
    dt = 0.5 / std::max(bound, 1e-12);
  }
  auto coarse = run(spec, ops, rho0.dims, factor, times, dt, nullptr);
  double change = 0.0;
  for (int halving = 1; halving <= options.max_halvings; ++halving) {
    auto fine = run(spec, ops, rho0.dims, factor, times, dt * 0.5, nullptr);
    change = max_change(coarse, fine);
    if (change < options.change_tolerance) {
      if (report) *report = {dt * 0.5, halving, change};
      return fine;
    }
    coarse = std::move(fine);
    dt *= 0.5;
  }
  throw Error(ErrorCode::NoConvergenceInStepHalving,
              "reduced state still changes by " + format_double(change) + " after " +
                  std::to_string(options.max_halvings) + " halvings");
}

FullState evolve(const SystemSpec& spec, const CutoffPlan& plan, const FullState& rho0, double t_end,
                 const EvolveOptions& options, EvolveReport* report) {
  const double times[] = {t_end};
  EvolveReport rep;
  evolve_reduced(spec, plan, rho0, times, options, &rep);
  const Operators ops = build_operators(spec, plan);
  MatrixXcd f;
  run(spec, ops, rho0.dims, factorize(rho0.rho), times, rep.dt, &f);
  if (report) *report = rep;
  return {f * f.adjoint(), rho0.dims};
}

ReducedDensityMatrix reduce(const FullState& state) {
  const Index ds = state.dims.front();
  const Index rest = state.rho.rows() / ds;
  ReducedDensityMatrix out;
  out.n_cut = static_cast<int>(ds) - 1;
  out.rho = MatrixXcd::Zero(ds, ds);
  for (Index n = 0; n < ds; ++n)
    for (Index m = 0; m < ds; ++m)
      out.rho(n, m) = state.rho.block(n * rest, m * rest, rest, rest).trace();
  out.trace_deficit = 1.0 - out.rho.trace().real();
  return out;
}

double compare(const ReducedDensityMatrix& analytic, const ReducedDensityMatrix& oracle, int n_max) {
  if (n_max > analytic.n_cut || n_max > oracle.n_cut)
    throw Error(ErrorCode::OutOfRange, "comparison range exceeds a matrix cutoff");
  return (analytic.rho.topLeftCorner(n_max + 1, n_max + 1) - oracle.rho.topLeftCorner(n_max + 1, n_max + 1))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace rdm::oracle
