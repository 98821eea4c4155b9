#include "rdmgen/coefficients.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rdmgen/io.hpp"

namespace rdm {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr cplx kI{0.0, 1.0};

// Generator with the two-photon couplings split into independent factors:
//   da/dt   = ... - 2i p a^+,    da^+/dt = ... + 2i q a.
// The physical system has (p, q) = (phi, conj phi). The transfer functions
// of a(t) depend on p*q only through L = G conj-G - 4 p q, so (p, q) =
// (1, |phi|^2) keeps alpha1, M_j unchanged while exposing alpha2 and N_j
// directly: S_{a,a+} = -2i alpha2 and S_{a,b_j^+} = 2 N_j, also at phi = 0.
MatrixXcd generator_matrix(const SystemSpec& spec, cplx p, cplx q) {
  const auto modes = bath_modes(spec.bath);
  const Index n = 2 * (static_cast<Index>(modes.size()) + 1);
  MatrixXcd a = MatrixXcd::Zero(n, n);
  double damping = 0.0;
  if (const auto* m = std::get_if<MemorylessBath>(&spec.bath)) damping = 0.5 * m->chi0;

  a(0, 0) = cplx{-damping, -spec.omega0};
  a(0, 1) = -2.0 * kI * p;
  a(1, 1) = cplx{-damping, spec.omega0};
  a(1, 0) = 2.0 * kI * q;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const Index b = 2 + 2 * static_cast<Index>(j);
    const cplx f = modes[j].f;
    a(0, b) = -kI * f;
    a(1, b + 1) = kI * std::conj(f);
    a(b, b) = cplx{0.0, -modes[j].omega};
    a(b, 0) = -kI * std::conj(f);
    a(b + 1, b + 1) = cplx{0.0, modes[j].omega};
    a(b + 1, 1) = kI * f;
  }
  return a;
}

// Linear model of the drive on one integration interval starting at t0:
// k(t0 + tau) = c . exp(D tau) z0 with real z0.
struct DriveModel {
  Eigen::MatrixXd d;
  Eigen::VectorXd z0;
  Eigen::RowVectorXcd c;

  Index size() const { return d.rows(); }
};

DriveModel drive_model(const DriveSpec& drive, double t0) {
  DriveModel dm;
  if (const auto* s = std::get_if<SinusoidalDrive>(&drive)) {
    dm.d = Eigen::MatrixXd{{0.0, s->nu}, {-s->nu, 0.0}};
    dm.z0 = Eigen::Vector2d{std::sin(s->nu * t0), std::cos(s->nu * t0)};
    dm.c = Eigen::RowVectorXcd::Zero(2);
    dm.c(0) = s->k0;
  } else if (const auto* tab = std::get_if<TabulatedDrive>(&drive)) {
    if (t0 < tab->t.front() || t0 >= tab->t.back())
      throw Error(ErrorCode::OutOfRange, "tabulated drive does not cover t=" + std::to_string(t0));
    auto it = std::upper_bound(tab->t.begin(), tab->t.end(), t0);
    const auto i = static_cast<std::size_t>(it - tab->t.begin()) - 1;
    const cplx slope = (tab->k[i + 1] - tab->k[i]) / (tab->t[i + 1] - tab->t[i]);
    dm.d = Eigen::MatrixXd{{0.0, 0.0}, {1.0, 0.0}};
    dm.z0 = Eigen::Vector2d{1.0, t0 - tab->t[i]};
    dm.c = Eigen::RowVectorXcd::Zero(2);
    dm.c(0) = tab->k[i];
    dm.c(1) = slope;
  } else {
    dm.d = Eigen::MatrixXd::Zero(0, 0);
    dm.z0 = Eigen::VectorXd::Zero(0);
    dm.c = Eigen::RowVectorXcd::Zero(0);
  }
  return dm;
}

// Interval endpoints: the grid refined by the tabulation nodes and by
// max_substep.
std::vector<double> step_points(const DriveSpec& drive, std::span<const double> grid,
                                double max_substep) {
  std::vector<double> nodes(grid.begin(), grid.end());
  if (const auto* tab = std::get_if<TabulatedDrive>(&drive)) {
    for (double t : tab->t)
      if (t > grid.front() && t < grid.back()) nodes.push_back(t);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<double> out{nodes.front()};
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double span = nodes[i] - nodes[i - 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil(span / max_substep - 1e-12)));
    for (int p = 1; p < pieces; ++p) out.push_back(nodes[i - 1] + span * p / pieces);
    out.push_back(nodes[i]);
  }
  return out;
}

void check_grid(std::span<const double> grid) {
  if (grid.empty() || grid.front() != 0.0)
    throw Error(ErrorCode::BadGrid, "time grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::BadGrid, "time grid must be strictly increasing");
}

// Homogeneous fundamental matrix plus the responses to a set of forcing
// terms, sampled on a grid.
struct LinearTrajectory {
  std::vector<MatrixXcd> fundamental;   // S(t) per grid point
  std::vector<MatrixXcd> forced;        // n x (#forcings) per grid point
};

// forcing[r] is a pair (row, conj): forcing r injects k(t) (or conj k(t))
// times `weight` into component `row`.
struct Forcing {
  Index row;
  bool conjugate;
  cplx weight;
};

LinearTrajectory integrate(const MatrixXcd& gen, const std::vector<std::vector<Forcing>>& forcings,
                           const DriveSpec& drive, std::span<const double> grid, double max_substep) {
  const Index n = gen.rows();
  const auto points = step_points(drive, grid, max_substep);
  const auto nf = static_cast<Index>(forcings.size());

  LinearTrajectory out;
  out.fundamental.reserve(grid.size());
  out.forced.reserve(grid.size());

  MatrixXcd s = MatrixXcd::Identity(n, n);
  MatrixXcd x = MatrixXcd::Zero(n, nf);
  std::size_t next_grid = 0;
  auto record = [&](double t) {
    while (next_grid < grid.size() && grid[next_grid] == t) {
      out.fundamental.push_back(s);
      out.forced.push_back(x);
      ++next_grid;
    }
  };
  record(points.front());

  const bool driven = !std::holds_alternative<ZeroDrive>(drive);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double t0 = points[i - 1];
    const double h = points[i] - t0;
    if (!driven) {
      const MatrixXcd e = (gen * h).exp();
      s = e * s;
      x = e * x;
    } else {
      const DriveModel dm = drive_model(drive, t0);
      const Index m = dm.size();
      MatrixXcd aug = MatrixXcd::Zero(n + m, n + m);
      aug.topLeftCorner(n, n) = gen;
      aug.bottomRightCorner(m, m) = dm.d.cast<cplx>();
      MatrixXcd e_hom;
      for (Index r = 0; r < nf; ++r) {
        aug.topRightCorner(n, m).setZero();
        for (const auto& f : forcings[static_cast<std::size_t>(r)]) {
          const Eigen::RowVectorXcd c = f.conjugate ? Eigen::RowVectorXcd(dm.c.conjugate()) : dm.c;
          aug.block(f.row, n, 1, m) += f.weight * c;
        }
        const MatrixXcd e = (aug * h).exp();
        if (r == 0) e_hom = e.topLeftCorner(n, n);
        x.col(r) = e.topLeftCorner(n, n) * x.col(r) + e.topRightCorner(n, m) * dm.z0.cast<cplx>();
      }
      if (nf == 0) e_hom = (gen * h).exp();
      s = e_hom * s;
    }
    record(points[i]);
  }
  return out;
}

// alpha/M/N/zeta from the split-coupling generator (see generator_matrix).
CoefficientSet extract(const SystemSpec& spec, std::span<const double> grid, double max_substep) {
  const MatrixXcd gen = generator_matrix(spec, cplx{1.0}, cplx{std::norm(spec.phi)});
  const std::vector<std::vector<Forcing>> forcings = {
      {{0, false, cplx{1.0}}},  // k into the a row: component a gives zeta1
      {{1, true, cplx{1.0}}},   // conj k into the a^+ row: component a gives -2i zeta2
  };
  const auto traj = integrate(gen, forcings, spec.drive, grid, max_substep);

  const auto modes = bath_modes(spec.bath);
  const auto nm = static_cast<Index>(modes.size());
  const auto ng = static_cast<Index>(grid.size());

  CoefficientSet cs;
  cs.spec = spec;
  cs.grid.assign(grid.begin(), grid.end());
  cs.alpha1.resize(grid.size());
  cs.alpha2.resize(grid.size());
  cs.zeta1.resize(grid.size());
  cs.zeta2.resize(grid.size());
  cs.m_coef = MatrixXcd::Zero(ng, nm);
  cs.n_coef = MatrixXcd::Zero(ng, nm);
  for (Index i = 0; i < ng; ++i) {
    const auto& s = traj.fundamental[static_cast<std::size_t>(i)];
    const auto& x = traj.forced[static_cast<std::size_t>(i)];
    cs.alpha1[static_cast<std::size_t>(i)] = s(0, 0);
    // alpha2 is real; the imaginary residue is rounding.
    cs.alpha2[static_cast<std::size_t>(i)] = cplx{(0.5 * kI * s(0, 1)).real(), 0.0};
    cs.zeta1[static_cast<std::size_t>(i)] = x(0, 0);
    cs.zeta2[static_cast<std::size_t>(i)] = 0.5 * kI * x(0, 1);
    for (Index j = 0; j < nm; ++j) {
      cs.m_coef(i, j) = kI * s(0, 2 + 2 * j);
      cs.n_coef(i, j) = 0.5 * s(0, 3 + 2 * j);
    }
  }
  return cs;
}

}  // namespace

Eigen::VectorXcd LinearGenerator::injection(cplx k) const {
  VectorXcd d = VectorXcd::Zero(a.rows());
  d(0) = -kI * k;
  d(1) = kI * std::conj(k);
  return d;
}

LinearGenerator assemble_generator(const SystemSpec& spec) {
  if (is_memoryless(spec.bath))
    throw Error(ErrorCode::Unsupported, "memoryless bath has no finite generator; use closed_form_alpha");
  return {generator_matrix(spec, spec.phi, std::conj(spec.phi))};
}

cplx response_function(const BathSpec& bath, double dt) {
  if (is_memoryless(bath))
    throw Error(ErrorCode::Unsupported, "delta response has no pointwise value");
  cplx acc{};
  for (const auto& m : bath_modes(bath)) acc += std::norm(m.f) * std::exp(cplx{0.0, -m.omega * dt});
  return acc;
}

CoefficientSet propagate(const SystemSpec& spec, std::span<const double> grid,
                         const PropagateOptions& options) {
  check_grid(grid);
  double step = options.max_substep;
  double worst = 0.0;
  for (int attempt = 0; attempt <= options.max_refinements; ++attempt, step *= 0.5) {
    CoefficientSet cs = extract(spec, grid, step);
    if (is_memoryless(spec.bath)) return cs;
    worst = 0.0;
    for (std::size_t i = 0; i < cs.size(); ++i) worst = std::max(worst, commutator_defect(cs, i));
    if (worst < options.defect_tolerance) return cs;
  }
  throw Error(ErrorCode::StepSizeTooCoarse,
              "commutator defect " + format_double(worst) + " exceeds tolerance");
}

BathCoefficientSet bath_coefficients(const SystemSpec& spec, std::span<const double> grid,
                                     const PropagateOptions& options) {
  check_grid(grid);
  if (!is_discrete(spec.bath))
    throw Error(ErrorCode::Unsupported, "bath coefficients need a discrete bath");
  const auto gen = assemble_generator(spec);
  const std::vector<std::vector<Forcing>> forcings = {
      {{0, false, -kI}, {1, true, kI}},
  };
  const auto nm = static_cast<Index>(bath_modes(spec.bath).size());
  const auto ng = static_cast<Index>(grid.size());

  double step = options.max_substep;
  double worst = 0.0;
  for (int attempt = 0; attempt <= options.max_refinements; ++attempt, step *= 0.5) {
    const auto traj = integrate(gen.a, forcings, spec.drive, grid, step);
    worst = 0.0;
    for (const auto& s : traj.fundamental) worst = std::max(worst, symplectic_defect(s));
    if (worst >= options.defect_tolerance) continue;

    BathCoefficientSet out;
    out.grid.assign(grid.begin(), grid.end());
    out.gamma = MatrixXcd::Zero(ng, nm);
    out.gamma_prime = MatrixXcd::Zero(ng, nm);
    out.omega = MatrixXcd::Zero(ng, nm);
    for (Index i = 0; i < ng; ++i) {
      const auto& s = traj.fundamental[static_cast<std::size_t>(i)];
      const auto& x = traj.forced[static_cast<std::size_t>(i)];
      MatrixXcd lam(nm, nm), lamp(nm, nm);
      for (Index j = 0; j < nm; ++j) {
        const Index bj = 2 + 2 * j;
        for (Index k = 0; k < nm; ++k) {
          lam(j, k) = s(bj, 2 + 2 * k);
          lamp(j, k) = s(bj, 3 + 2 * k);
        }
        out.gamma(i, j) = s(bj, 0);
        out.gamma_prime(i, j) = s(bj, 1);
        out.omega(i, j) = x(bj, 0);
      }
      out.lambda.push_back(std::move(lam));
      out.lambda_prime.push_back(std::move(lamp));
    }
    return out;
  }
  throw Error(ErrorCode::StepSizeTooCoarse,
              "symplectic defect " + format_double(worst) + " exceeds tolerance");
}

Eigen::MatrixXcd fundamental_matrix(const SystemSpec& spec, double t) {
  const MatrixXcd gen = generator_matrix(spec, spec.phi, std::conj(spec.phi));
  const int pieces = std::max(1, static_cast<int>(std::ceil(t / 0.5)));
  const MatrixXcd e = (gen * (t / pieces)).exp();
  MatrixXcd s = MatrixXcd::Identity(gen.rows(), gen.cols());
  for (int p = 0; p < pieces; ++p) s = e * s;
  return s;
}

double symplectic_defect(const Eigen::MatrixXcd& s) {
  VectorXcd jdiag(s.rows());
  for (Index i = 0; i < s.rows(); ++i) jdiag(i) = (i % 2 == 0) ? 1.0 : -1.0;
  const MatrixXcd j = jdiag.asDiagonal();
  return (s * j * s.adjoint() - j).cwiseAbs().maxCoeff();
}

std::pair<cplx, cplx> closed_form_alpha(const SystemSpec& spec, double t) {
  const double w = spec.omega0;
  if (std::holds_alternative<NoBath>(spec.bath))
    return {std::exp(cplx{0.0, -w * t}), cplx{std::sin(w * t) / w, 0.0}};
  if (const auto* m = std::get_if<MemorylessBath>(&spec.bath)) {
    const double decay = std::exp(-0.5 * m->chi0 * t);
    return {decay * std::exp(cplx{0.0, -w * t}), cplx{decay * std::sin(w * t) / w, 0.0}};
  }
  throw Error(ErrorCode::Unsupported, "closed-form alpha needs no bath or a memoryless bath");
}

double commutator_defect(const CoefficientSet& cs, std::size_t index) {
  const double phi2 = std::norm(cs.spec.phi);
  const auto i = static_cast<Index>(index);
  double acc = std::norm(cs.alpha1[index]) - 4.0 * phi2 * std::norm(cs.alpha2[index]);
  for (Index j = 0; j < cs.m_coef.cols(); ++j)
    acc += std::norm(cs.m_coef(i, j)) - 4.0 * phi2 * std::norm(cs.n_coef(i, j));
  return std::abs(acc - 1.0);
}

double eta(const CoefficientSet& cs, std::size_t index, double beta) {
  const auto modes = bath_modes(cs.spec.bath);
  double acc = 0.0;
  for (std::size_t j = 0; j < modes.size(); ++j)
    acc += std::norm(cs.m_coef(static_cast<Index>(index), static_cast<Index>(j))) *
           bose_occupation(beta, modes[j].omega);
  return acc;
}

ThermalQuadratic theta_quadratic(const CoefficientSet& cs, std::size_t index, double beta) {
  const auto modes = bath_modes(cs.spec.bath);
  const cplx phi = cs.spec.phi;
  const double phi2 = std::norm(phi);
  ThermalQuadratic th;
  th.beta = beta;
  th.t = cs.grid[index];
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const cplx m = cs.m_coef(static_cast<Index>(index), static_cast<Index>(j));
    const cplx n = cs.n_coef(static_cast<Index>(index), static_cast<Index>(j));
    const double occ = bose_occupation(beta, modes[j].omega);
    th.a_mixed += occ * (std::norm(m) + 4.0 * phi2 * std::norm(n)) + 4.0 * phi2 * std::norm(n);
    th.b_lam2 += kI * (2.0 * occ + 1.0) * std::conj(phi * n * m);
    th.c_lambar2 += -kI * (2.0 * occ + 1.0) * phi * n * m;
  }
  return th;
}

cplx big_z(const CoefficientSet& cs, std::size_t index, cplx gamma) {
  return -kI * cs.zeta1[index] + gamma * cs.alpha1[index];
}

cplx zeta_combined(const CoefficientSet& cs, std::size_t index) {
  return cs.zeta1[index] + 2.0 * kI * cs.spec.phi * cs.zeta2[index];
}

void write_coefficients_csv(std::ostream& os, const CoefficientSet& cs) {
  os << "t,re_alpha1,im_alpha1,re_alpha2,im_alpha2,re_zeta1,im_zeta1,re_zeta2,im_zeta2";
  for (std::size_t j = 0; j < cs.modes(); ++j)
    os << ",re_M" << j + 1 << ",im_M" << j + 1 << ",re_N" << j + 1 << ",im_N" << j + 1;
  os << '\n';
  for (std::size_t i = 0; i < cs.size(); ++i) {
    os << format_double(cs.grid[i]);
    for (const cplx v : {cs.alpha1[i], cs.alpha2[i], cs.zeta1[i], cs.zeta2[i]})
      os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    for (std::size_t j = 0; j < cs.modes(); ++j) {
      for (const cplx v : {cs.m_coef(static_cast<Index>(i), static_cast<Index>(j)),
                           cs.n_coef(static_cast<Index>(i), static_cast<Index>(j))})
        os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    }
    os << '\n';
  }
}

}  // namespace rdm
