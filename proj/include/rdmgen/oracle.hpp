#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "rdmgen/genfunc.hpp"
#include "rdmgen/model.hpp"

// Brute-force reference: the full Hamiltonian on a truncated Fock space of
// the system and each discrete bath mode, propagated unitarily and traced
// down to the system.
//
// Basis ordering: system index slowest, then bath modes in declaration
// order (first mode slowest).
namespace rdm::oracle {

struct CutoffPlan {
  int n_sys = 14;
  std::vector<int> n_bath;  // one Fock cutoff per discrete mode
  double dt = 0.0;          // <= 0: chosen so that ||H||_1 dt <= 0.5
  std::size_t max_dimension = 4096;
  double thermal_tail_tolerance = 1e-10;

  std::size_t dimension() const;
  std::vector<int> dims() const;  // per-factor dimensions, system first
};

struct FullState {
  Eigen::MatrixXcd rho;
  std::vector<int> dims;

  double hermiticity_defect() const;
  double trace_defect() const;
  double min_eigenvalue() const;
};

// Throws DimensionCeiling or Unsupported (memoryless bath).
Eigen::MatrixXcd build_hamiltonian(const SystemSpec& spec, const CutoffPlan& plan, double t);

// Product of truncated Bose-Einstein states, normalized on the kept ladder.
// Throws CutoffTooSmallForTemperature when a mode's discarded weight
// exp(-beta w (n+1)) exceeds plan.thermal_tail_tolerance.
Eigen::MatrixXcd thermal_bath_state(const SystemSpec& spec, const CutoffPlan& plan);

// Truncated, renormalized coherent-state amplitudes.
Eigen::VectorXcd coherent_amplitudes(cplx gamma, int n_cut);

// |gamma><gamma| (x) thermal bath.
FullState initial_state(const SystemSpec& spec, const CutoffPlan& plan, cplx gamma);

struct EvolveOptions {
  double change_tolerance = 1e-8;  // max |delta rho_S| between dt and dt/2
  int max_halvings = 8;
};

struct EvolveReport {
  double dt = 0.0;          // accepted step
  int halvings = 0;
  double last_change = 0.0;
};

// rho_S at each requested time (ascending, >= 0). Steps of a fourth-order
// commutator-free Magnus scheme are halved until the reduced states stop
// changing. Throws NoConvergenceInStepHalving.
std::vector<ReducedDensityMatrix> evolve_reduced(const SystemSpec& spec, const CutoffPlan& plan,
                                                 const FullState& rho0, std::span<const double> times,
                                                 const EvolveOptions& options = {},
                                                 EvolveReport* report = nullptr);

// Full state at t_end under the same step-halving control.
FullState evolve(const SystemSpec& spec, const CutoffPlan& plan, const FullState& rho0, double t_end,
                 const EvolveOptions& options = {}, EvolveReport* report = nullptr);

// Partial trace over every bath factor.
ReducedDensityMatrix reduce(const FullState& state);

// max_{n,m <= n_max} |analytic - oracle|
double compare(const ReducedDensityMatrix& analytic, const ReducedDensityMatrix& oracle, int n_max);

}  // namespace rdm::oracle
