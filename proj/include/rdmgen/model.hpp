#pragma once

#include <complex>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rdmgen/error.hpp"

// Physical scenario shared by every module.
//
// Units: hbar = k_B = 1. Frequencies are in units of the reference frequency
// (omega0 defaults to 1), so times are the dimensionless tau = omega0 * t.
// beta multiplies frequencies directly in Bose factors, 1 / (exp(beta*w) - 1);
// beta = +inf is zero temperature.
namespace rdm {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ZeroDrive {};

// k(t) = k0 * sin(nu * t)
struct SinusoidalDrive {
  double k0 = 0.0;
  double nu = 1.0;
};

// Complex samples of k(t), linearly interpolated. Grid starts at 0.
struct TabulatedDrive {
  std::vector<double> t;
  std::vector<cplx> k;
};

using DriveSpec = std::variant<ZeroDrive, SinusoidalDrive, TabulatedDrive>;

struct BathMode {
  double omega = 1.0;
  cplx f{};
};

struct NoBath {};

struct DiscreteBath {
  std::vector<BathMode> modes;
};

// chi(t) = chi0 * delta(t), the memoryless (Markov) response.
struct MemorylessBath {
  double chi0 = 0.0;
};

using BathSpec = std::variant<NoBath, DiscreteBath, MemorylessBath>;

struct SystemSpec {
  double omega0 = 1.0;
  cplx phi{};  // two-photon parameter; only i*phi_I is accepted
  DriveSpec drive = ZeroDrive{};
  BathSpec bath = NoBath{};
  double beta = kInf;

  double phi_imag() const { return phi.imag(); }
};

enum class SpecIssueKind {
  NonPositiveFrequency,
  UnstableTwoPhoton,
  NonzeroPhiReal,
  BadGrid,
  BadParameter,
};

struct SpecIssue {
  SpecIssueKind kind;
  std::string field;
  std::string message;
};

std::string_view to_string(SpecIssueKind kind);

class SpecError : public Error {
 public:
  explicit SpecError(std::vector<SpecIssue> issues);
  const std::vector<SpecIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<SpecIssue> issues_;
};

// All violated invariants of `spec`; empty when valid.
std::vector<SpecIssue> check_spec(const SystemSpec& spec);

// Returns the normalized spec or throws SpecError listing every violation.
// Idempotent.
SystemSpec validate_spec(const SystemSpec& spec);

// k(t). Throws OutOfRange for tabulated drives evaluated outside the grid.
cplx drive_eval(const DriveSpec& drive, double t);

// Laplace transform of the bath response function at s.
// Discrete: sum_j |f_j|^2 / (s + i w_j). Memoryless: chi0 / 2 (the delta sits
// on the lower integration boundary). Throws PoleHit at s = -i w_j.
cplx susceptibility_laplace(const BathSpec& bath, cplx s);

// 1 / (exp(beta * omega) - 1); zero when beta is infinite.
double bose_occupation(double beta, double omega);

inline bool is_discrete(const BathSpec& bath) {
  return std::holds_alternative<DiscreteBath>(bath);
}
inline bool is_memoryless(const BathSpec& bath) {
  return std::holds_alternative<MemorylessBath>(bath);
}

// Modes of a discrete bath; empty span otherwise.
std::span<const BathMode> bath_modes(const BathSpec& bath);

}  // namespace rdm
