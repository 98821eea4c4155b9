#include "rdmgen/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::StepSizeTooCoarse: return "StepSizeTooCoarse";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::SeriesNotConverged: return "SeriesNotConverged";
    case ErrorCode::ResonantDrive: return "ResonantDrive";
    case ErrorCode::DimensionCeiling: return "DimensionCeiling";
    case ErrorCode::CutoffTooSmallForTemperature: return "CutoffTooSmallForTemperature";
    case ErrorCode::NoConvergenceInStepHalving: return "NoConvergenceInStepHalving";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::string_view to_string(SpecIssueKind kind) {
  switch (kind) {
    case SpecIssueKind::NonPositiveFrequency: return "NonPositiveFrequency";
    case SpecIssueKind::UnstableTwoPhoton: return "UnstableTwoPhoton";
    case SpecIssueKind::NonzeroPhiReal: return "NonzeroPhiReal";
    case SpecIssueKind::BadGrid: return "BadGrid";
    case SpecIssueKind::BadParameter: return "BadParameter";
  }
  return "Unknown";
}

namespace {

std::string join_issues(const std::vector<SpecIssue>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].field << ": " << to_string(issues[i].kind) << " (" << issues[i].message << ")";
  }
  return os.str();
}

double zero_signed(double x) { return x == 0.0 ? 0.0 : x; }

}  // namespace

SpecError::SpecError(std::vector<SpecIssue> issues)
    : Error(ErrorCode::InvalidSpec, join_issues(issues)), issues_(std::move(issues)) {}

std::vector<SpecIssue> check_spec(const SystemSpec& spec) {
  std::vector<SpecIssue> issues;
  auto add = [&](SpecIssueKind kind, std::string field, std::string msg) {
    issues.push_back({kind, std::move(field), std::move(msg)});
  };

  if (!(spec.omega0 > 0.0) || !std::isfinite(spec.omega0))
    add(SpecIssueKind::NonPositiveFrequency, "system.omega0", "must be finite and > 0");
  if (!(spec.beta > 0.0))
    add(SpecIssueKind::BadParameter, "system.beta", "must be > 0 (inf allowed)");
  if (spec.phi.real() != 0.0)
    add(SpecIssueKind::NonzeroPhiReal, "system.phi",
        "real part must be absorbed into renormalized mass/frequency beforehand");
  if (!(std::abs(spec.phi) < 0.5 * spec.omega0))
    add(SpecIssueKind::UnstableTwoPhoton, "system.phi", "|phi| must be < omega0/2");

  if (const auto* s = std::get_if<SinusoidalDrive>(&spec.drive)) {
    if (!(s->k0 >= 0.0)) add(SpecIssueKind::BadParameter, "drive.k0", "must be >= 0");
    if (!(s->nu > 0.0)) add(SpecIssueKind::NonPositiveFrequency, "drive.nu", "must be > 0");
  } else if (const auto* tab = std::get_if<TabulatedDrive>(&spec.drive)) {
    if (tab->t.size() != tab->k.size() || tab->t.size() < 2) {
      add(SpecIssueKind::BadGrid, "drive.samples", "need >= 2 samples with matching t and k");
    } else {
      if (tab->t.front() != 0.0) add(SpecIssueKind::BadGrid, "drive.samples", "grid must start at 0");
      for (std::size_t i = 1; i < tab->t.size(); ++i) {
        if (!(tab->t[i] > tab->t[i - 1])) {
          add(SpecIssueKind::BadGrid, "drive.samples", "grid must be strictly increasing");
          break;
        }
      }
    }
  }

  if (const auto* d = std::get_if<DiscreteBath>(&spec.bath)) {
    for (std::size_t j = 0; j < d->modes.size(); ++j) {
      if (!(d->modes[j].omega > 0.0))
        add(SpecIssueKind::NonPositiveFrequency, "bath.modes[" + std::to_string(j) + "].omega",
            "must be > 0");
    }
  } else if (const auto* m = std::get_if<MemorylessBath>(&spec.bath)) {
    if (!(m->chi0 >= 0.0)) add(SpecIssueKind::BadParameter, "bath.chi0", "must be >= 0");
  }
  return issues;
}

SystemSpec validate_spec(const SystemSpec& spec) {
  auto issues = check_spec(spec);
  if (!issues.empty()) throw SpecError(std::move(issues));
  SystemSpec out = spec;
  out.phi = {0.0, zero_signed(spec.phi.imag())};
  return out;
}

cplx drive_eval(const DriveSpec& drive, double t) {
  if (std::holds_alternative<ZeroDrive>(drive)) return {};
  if (const auto* s = std::get_if<SinusoidalDrive>(&drive)) return s->k0 * std::sin(s->nu * t);
  const auto& tab = std::get<TabulatedDrive>(drive);
  if (tab.t.empty() || t < tab.t.front() || t > tab.t.back())
    throw Error(ErrorCode::OutOfRange, "tabulated drive evaluated at t=" + std::to_string(t));
  auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
  if (it == tab.t.end()) return tab.k.back();
  const auto i = static_cast<std::size_t>(it - tab.t.begin()) - 1;
  const double w = (t - tab.t[i]) / (tab.t[i + 1] - tab.t[i]);
  return (1.0 - w) * tab.k[i] + w * tab.k[i + 1];
}

cplx susceptibility_laplace(const BathSpec& bath, cplx s) {
  if (const auto* m = std::get_if<MemorylessBath>(&bath)) return 0.5 * m->chi0;
  cplx acc{};
  for (const auto& mode : bath_modes(bath)) {
    const cplx denom = s + cplx{0.0, mode.omega};
    if (denom == cplx{})
      throw Error(ErrorCode::PoleHit, "s = -i*omega_j for omega_j=" + std::to_string(mode.omega));
    acc += std::norm(mode.f) / denom;
  }
  return acc;
}

double bose_occupation(double beta, double omega) {
  if (std::isinf(beta)) return 0.0;
  return 1.0 / std::expm1(beta * omega);
}

std::span<const BathMode> bath_modes(const BathSpec& bath) {
  if (const auto* d = std::get_if<DiscreteBath>(&bath)) return d->modes;
  return {};
}

}  // namespace rdm
