#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rdmgen/closedform.hpp"
#include "rdmgen/config.hpp"

// Scenario commands behind the rdmgen executable. Each writes one file into
// the output directory and returns its path.
namespace rdm::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitComparisonFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// 2 for input problems, 3 for numerical non-convergence.
int exit_code(ErrorCode code);

struct PnRow {
  double x = 0.0;  // t or eta
  std::vector<double> p;
  PnBranch branch = PnBranch::Laguerre;
};

// P_0..P_pn_max on run.t_grid. phi = 0 uses the Laguerre law (a memoryless
// bath contributes no thermal broadening); phi != 0 needs the dissipationless
// sinusoidally driven ground state and uses the Hermite series. Anything else
// throws Unsupported pointing at the rho command.
std::vector<PnRow> pn_table(const RunConfig& cfg);

// Large-time P_n against eta for a memoryless bath and sinusoidal drive at phi = 0.
std::vector<PnRow> pn_eta_sweep(const RunConfig& cfg);

// Built-in configurations for fig1, fig2 and fig3.
std::string preset_text(std::string_view figure);

fs::path cmd_coeffs(const RunConfig& cfg, const fs::path& out);
fs::path cmd_pn(const RunConfig& cfg, const fs::path& out);
fs::path cmd_rho(const RunConfig& cfg, const fs::path& out);
fs::path cmd_fig(std::string_view figure, const RunConfig& cfg, const fs::path& out);

struct CompareOutcome {
  fs::path report;
  double max_deviation = 0.0;
  double bound = 0.0;
  bool passed = false;
};

CompareOutcome cmd_oracle_compare(const RunConfig& cfg, const fs::path& out);

}  // namespace rdm::cli
