#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "rdmgen/coefficients.hpp"
#include "rdmgen/genfunc.hpp"
#include "rdmgen/oracle.hpp"

using namespace rdm;
using namespace rdm::oracle;

namespace {

SystemSpec one_mode(cplx phi, cplx f, double k0, double beta) {
  SystemSpec s;
  s.phi = phi;
  s.bath = DiscreteBath{{{1.1, f}}};
  if (k0 != 0.0) s.drive = SinusoidalDrive{k0, 0.95};
  s.beta = beta;
  return validate_spec(s);
}

CutoffPlan plan_for(int n_sys, int n_bath) {
  CutoffPlan p;
  p.n_sys = n_sys;
  p.n_bath = {n_bath};
  return p;
}

}  // namespace

TEST_CASE("hamiltonian matrix elements") {
  CutoffPlan bare;
  bare.n_sys = 1;
  const auto h = build_hamiltonian(validate_spec(SystemSpec{}), bare, 0.0);
  REQUIRE(h.rows() == 2);
  CHECK(h(0, 0) == cplx{0.5});
  CHECK(h(1, 1) == cplx{1.5});
  CHECK(h(0, 1) == cplx{0.0});

  const cplx f{0.1, 0.04};
  const auto s = one_mode({0.0, 0.05}, f, 0.3, 1.0);
  const auto plan = plan_for(3, 2);
  const auto hm = build_hamiltonian(s, plan, 0.7);
  // |n_sys, n_bath> sits at index n_sys * 3 + n_bath
  CHECK(std::abs(hm(1 * 3 + 0, 0 * 3 + 1) - f) < 1e-15);
  CHECK(std::abs(hm(0 * 3 + 1, 1 * 3 + 0) - std::conj(f)) < 1e-15);
  // phi a^+^2 and k(t) a^+
  CHECK(std::abs(hm(2 * 3, 0) - s.phi * std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(hm(1 * 3, 0) - 0.3 * std::sin(0.95 * 0.7)) < 1e-15);
  // bath energy
  CHECK(std::abs(hm(2, 2) - (0.5 + 2 * 1.1)) < 1e-15);
  CHECK((hm - hm.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dimension ceiling and unsupported baths") {
  const auto s = one_mode({}, 0.1, 0.0, kInf);
  auto plan = plan_for(100, 100);
  CHECK_THROWS_AS(build_hamiltonian(s, plan, 0.0), Error);
  plan.max_dimension = 20000;
  CHECK(plan.dimension() == 101 * 101);

  SystemSpec markov;
  markov.bath = MemorylessBath{0.1};
  try {
    build_hamiltonian(validate_spec(markov), plan_for(4, 1), 0.0);
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
}

TEST_CASE("thermal bath state") {
  const auto cold = thermal_bath_state(one_mode({}, 0.1, 0.0, kInf), plan_for(1, 4));
  CHECK(cold(0, 0) == cplx{1.0});
  CHECK(cold.trace() == cplx{1.0});

  SystemSpec s;
  s.bath = DiscreteBath{{{1.0, 0.1}}};
  s.beta = std::log(2.0);
  auto plan = plan_for(1, 40);
  const auto rho = thermal_bath_state(validate_spec(s), plan);
  for (int n = 0; n < 6; ++n) CHECK(rho(n, n).real() == doctest::Approx(std::pow(0.5, n + 1)).epsilon(1e-10));
  double mean = 0.0;
  for (int n = 0; n <= 40; ++n) mean += n * rho(n, n).real();
  CHECK(mean == doctest::Approx(bose_occupation(s.beta, 1.0)).epsilon(1e-9));

  plan.n_bath = {5};
  try {
    thermal_bath_state(validate_spec(s), plan);
    FAIL("expected CutoffTooSmallForTemperature");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CutoffTooSmallForTemperature);
  }
}

TEST_CASE("initial state is a valid product") {
  const auto s = one_mode({0.0, 0.05}, 0.1, 0.05, 1.0);
  auto plan = plan_for(10, 8);
  plan.thermal_tail_tolerance = 1e-4;
  const auto st = initial_state(s, plan, {0.5, 0.2});
  CHECK(st.hermiticity_defect() < 1e-15);
  CHECK(st.trace_defect() < 1e-14);
  CHECK(st.min_eigenvalue() > -1e-14);
  const auto r = reduce(st);
  const auto amp = coherent_amplitudes({0.5, 0.2}, 10);
  CHECK((r.rho - amp * amp.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(amp.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("reduce") {
  // maximally entangled pair of two-level truncations
  FullState bell;
  bell.dims = {2, 2};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  bell.rho = psi * psi.adjoint();
  const auto r = reduce(bell);
  CHECK((r.rho - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  // product state
  Eigen::MatrixXcd sys(2, 2), bath(3, 3);
  sys << 0.7, cplx{0.1, 0.2}, cplx{0.1, -0.2}, 0.3;
  bath = Eigen::MatrixXcd::Zero(3, 3);
  bath.diagonal() << 0.5, 0.3, 0.2;
  FullState prod;
  prod.dims = {2, 3};
  prod.rho = Eigen::kroneckerProduct(sys, bath);
  CHECK((reduce(prod).rho - sys).cwiseAbs().maxCoeff() < 1e-16);
  CHECK(std::abs(reduce(prod).rho.trace() - prod.rho.trace()) < 1e-16);
}

TEST_CASE("compare") {
  ReducedDensityMatrix a;
  a.n_cut = 2;
  a.rho = Eigen::MatrixXcd::Zero(3, 3);
  a.rho(0, 0) = 1.0;
  auto b = a;
  CHECK(compare(a, b, 2) == 0.0);
  b.rho(1, 0) += 1e-5;
  CHECK(compare(a, b, 2) == doctest::Approx(1e-5));
  CHECK(compare(a, b, 0) == 0.0);
}

TEST_CASE("free evolution rotates a coherent state") {
  const auto s = one_mode({}, 0.0, 0.0, kInf);
  const auto plan = plan_for(16, 1);
  const cplx g{0.8, 0.3};
  const auto st = initial_state(s, plan, g);
  const std::vector<double> times{0.0, 0.9, 2.5};
  const auto rs = evolve_reduced(s, plan, st, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto amp = coherent_amplitudes(g * std::exp(cplx{0, -times[i]}), 16);
    CHECK((rs[i].rho - amp * amp.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    // populations are stationary
    CHECK((rs[i].rho.diagonal() - rs[0].rho.diagonal()).cwiseAbs().maxCoeff() < 1e-9);
  }
  // t = 0 is the identity map
  CHECK((rs[0].rho - reduce(st).rho).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("unitarity over a full run") {
  const auto s = one_mode({0.0, 0.05}, {0.1, 0.05}, 0.1, 1.0);
  auto plan = plan_for(8, 6);
  plan.thermal_tail_tolerance = 1e-2;
  const auto st = initial_state(s, plan, {0.4, 0.0});
  EvolveReport rep;
  const auto end = evolve(s, plan, st, 3.0, {}, &rep);
  CHECK(end.trace_defect() < 1e-10);
  CHECK(end.hermiticity_defect() < 1e-10);
  CHECK(end.min_eigenvalue() > -1e-9);
  CHECK(rep.dt > 0.0);
  CHECK(rep.last_change < 1e-8);
}

TEST_CASE("decoupled oracle agrees with the analytic state") {
  // f = 0 and k = 0: only the squeezing term acts
  SystemSpec bare;
  bare.phi = {0.0, 0.08};
  const auto s = validate_spec(bare);
  CutoffPlan plan;
  plan.n_sys = 20;
  const std::vector<double> times{0.0, 1.0, 3.0};
  const auto rs = evolve_reduced(s, plan, initial_state(s, plan, {0.3, -0.2}), times);
  const auto cs = propagate(s, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    RhoOptions o;
    o.n_cut = 8;
    CHECK(compare(rho_matrix(cs, i, {0.3, -0.2}, o), rs[i], 8) < 1e-10);
  }
}

TEST_CASE("the comparison detects a sign error in phi") {
  // evaluating the analytic side with -phi must not pass
  const auto s = one_mode({0.0, 0.1}, {0.1, 0.0}, 0.05, kInf);
  auto flipped = s;
  flipped.phi = -s.phi;
  const auto plan = plan_for(16, 6);
  const std::vector<double> times{0.0, 2.0, 5.0};
  const auto rs = evolve_reduced(s, plan, initial_state(s, plan, {0.5, 0.0}), times);
  const auto good = propagate(s, times), bad = propagate(flipped, times);
  RhoOptions o;
  o.n_cut = 6;
  CHECK(compare(rho_matrix(good, 2, {0.5, 0.0}, o), rs[2], 6) < 1e-5);
  CHECK(compare(rho_matrix(bad, 2, {0.5, 0.0}, o), rs[2], 6) > 1e-2);
}
