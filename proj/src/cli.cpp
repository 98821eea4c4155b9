#include "rdmgen/cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rdmgen/coefficients.hpp"
#include "rdmgen/genfunc.hpp"
#include "rdmgen/io.hpp"
#include "rdmgen/oracle.hpp"

namespace rdm::cli {

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name, fs::path& path) {
  fs::create_directories(dir);
  path = dir / name;
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::ConfigError, path.string() + ": cannot open for writing");
  return os;
}

void write_pn_csv(std::ostream& os, const std::string& axis, const std::vector<PnRow>& rows, int pn_max) {
  os << axis;
  for (int n = 0; n <= pn_max; ++n) os << ",P" << n;
  os << ",branch\n";
  for (const auto& row : rows) {
    os << format_double(row.x);
    for (double p : row.p) os << ',' << format_double(p);
    os << ',' << to_string(row.branch) << '\n';
  }
}

std::string complex_json(cplx v) { return "[" + format_double(v.real()) + ", " + format_double(v.imag()) + "]"; }

void write_scenario_json(std::ostream& os, const RunConfig& cfg) {
  const SystemSpec& s = cfg.spec;
  os << "  \"scenario\": {\n";
  os << "    \"omega0\": " << format_double(s.omega0) << ",\n";
  os << "    \"phi\": " << complex_json(s.phi) << ",\n";
  os << "    \"beta\": " << (std::isinf(s.beta) ? std::string("\"inf\"") : format_double(s.beta)) << ",\n";
  os << "    \"gamma\": " << complex_json(cfg.gamma) << ",\n";
  if (const auto* d = std::get_if<SinusoidalDrive>(&s.drive))
    os << "    \"drive\": {\"type\": \"sinusoidal\", \"k0\": " << format_double(d->k0)
       << ", \"nu\": " << format_double(d->nu) << "},\n";
  else if (const auto* tab = std::get_if<TabulatedDrive>(&s.drive))
    os << "    \"drive\": {\"type\": \"tabulated\", \"samples\": " << tab->t.size() << "},\n";
  else
    os << "    \"drive\": {\"type\": \"zero\"},\n";
  os << "    \"bath\": [";
  const auto modes = bath_modes(s.bath);
  for (std::size_t j = 0; j < modes.size(); ++j)
    os << (j ? ", " : "") << "{\"omega\": " << format_double(modes[j].omega) << ", \"f\": " << complex_json(modes[j].f)
       << '}';
  os << "]\n  },\n";
}

bool is_zero_phi(const SystemSpec& s) { return s.phi == cplx{}; }

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::StepSizeTooCoarse:
    case ErrorCode::OrderTooLarge:
    case ErrorCode::TruncationNotConverged:
    case ErrorCode::SeriesNotConverged:
    case ErrorCode::NoConvergenceInStepHalving:
    case ErrorCode::PoleHit:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

std::vector<PnRow> pn_table(const RunConfig& cfg) {
  const SystemSpec& s = cfg.spec;
  const int pn_max = cfg.run.pn_max;
  std::vector<PnRow> rows;
  if (is_zero_phi(s)) {
    const CoefficientSet cs = propagate(s, cfg.run.t_grid);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const cplx z = big_z(cs, i, cfg.gamma);
      const double e = eta(cs, i, s.beta);
      PnRow row{cs.grid[i], {}, PnBranch::Laguerre};
      for (int n = 0; n <= pn_max; ++n) {
        const PnResult r = pn_laguerre(z, e, n);
        row.p.push_back(r.p);
        row.branch = r.branch;
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }
  const auto* drive = std::get_if<SinusoidalDrive>(&s.drive);
  if (!std::holds_alternative<NoBath>(s.bath) || cfg.gamma != cplx{} || !drive)
    throw Error(ErrorCode::Unsupported,
                "closed-form P_n needs phi = 0, or phi != 0 with no bath, gamma = 0 and a sinusoidal drive; "
                "use the rho command for this scenario");
  for (double t : cfg.run.t_grid) {
    const auto [a1, a2] = closed_form_alpha(s, t);
    const ZetaSinusoidal z = zeta_sinusoidal(drive->k0, drive->nu, s.omega0, s.phi_imag(), t);
    PnRow row{t, {}, PnBranch::HermiteSeries};
    for (int n = 0; n <= pn_max; ++n) {
      const PnResult r = pn_hermite(a1, a2.real(), s.phi_imag(), z.zeta, n);
      row.p.push_back(r.p);
      row.branch = r.branch;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<PnRow> pn_eta_sweep(const RunConfig& cfg) {
  const SystemSpec& s = cfg.spec;
  const auto* drive = std::get_if<SinusoidalDrive>(&s.drive);
  const auto* bath = std::get_if<MemorylessBath>(&s.bath);
  if (!drive || !bath || !is_zero_phi(s))
    throw Error(ErrorCode::Unsupported, "eta sweeps need phi = 0, a memoryless bath and a sinusoidal drive");
  const LargeTimeLimits lim = large_time_limits(drive->k0, drive->nu, s.omega0, bath->chi0, {}, s.beta);
  const cplx z{std::sqrt(lim.z2), 0.0};
  std::vector<PnRow> rows;
  for (int i = 0; i <= cfg.run.eta_steps; ++i) {
    const double e = cfg.run.eta_max * i / cfg.run.eta_steps;
    PnRow row{e, {}, PnBranch::Laguerre};
    for (int n = 0; n <= cfg.run.pn_max; ++n) {
      const PnResult r = pn_laguerre(z, e, n);
      row.p.push_back(r.p);
      row.branch = r.branch;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string preset_text(std::string_view figure) {
  if (figure == "fig1")
    return "[drive]\ntype = sinusoidal\nk0 = 0.02\nnu = 0.99\n"
           "[bath]\ntype = memoryless\nchi0 = 0.1\n"
           "[run]\npn_max = 3\neta_max = 2\neta_steps = 200\n";
  if (figure == "fig2")
    return "[drive]\ntype = sinusoidal\nk0 = 0.2\nnu = 0.99\n"
           "[bath]\ntype = memoryless\nchi0 = 0.1\n"
           "[run]\npn_max = 4\neta_max = 2\neta_steps = 200\n";
  if (figure == "fig3") {
    std::ostringstream os;
    os << "[system]\nphi_im = 0.1\n"
       << "[drive]\ntype = sinusoidal\nk0 = 1\nnu = 0.9\n"
       << "[run]\npn_max = 4\nt_end = " << format_double(3.0 * std::numbers::pi) << "\nsteps = 300\n";
    return os.str();
  }
  throw Error(ErrorCode::ConfigError, std::string(figure) + ": no such preset");
}

fs::path cmd_coeffs(const RunConfig& cfg, const fs::path& out) {
  const CoefficientSet cs = propagate(cfg.spec, cfg.run.t_grid);
  fs::path path;
  auto os = open_output(out, "coeffs.csv", path);
  write_coefficients_csv(os, cs);
  return path;
}

fs::path cmd_pn(const RunConfig& cfg, const fs::path& out) {
  const auto rows = pn_table(cfg);
  fs::path path;
  auto os = open_output(out, "pn.csv", path);
  write_pn_csv(os, "t", rows, cfg.run.pn_max);
  return path;
}

fs::path cmd_rho(const RunConfig& cfg, const fs::path& out) {
  const CoefficientSet cs = propagate(cfg.spec, cfg.run.t_grid);
  RhoOptions opts;
  opts.n_cut = cfg.run.n_cut;
  opts.s_max = cfg.run.s_max;
  std::vector<ReducedDensityMatrix> rdms;
  for (std::size_t i = 0; i < cs.size(); ++i) rdms.push_back(rho_matrix(cs, i, cfg.gamma, opts));
  fs::path path;
  auto os = open_output(out, "rho.json", path);
  write_rdm_json_array(os, rdms);
  return path;
}

fs::path cmd_fig(std::string_view figure, const RunConfig& cfg, const fs::path& out) {
  const auto rows = figure == "fig3" ? pn_table(cfg) : pn_eta_sweep(cfg);
  fs::path path;
  auto os = open_output(out, std::string(figure) + ".csv", path);
  write_pn_csv(os, figure == "fig3" ? "tau" : "eta", rows, cfg.run.pn_max);
  return path;
}

CompareOutcome cmd_oracle_compare(const RunConfig& cfg, const fs::path& out) {
  const SystemSpec& s = cfg.spec;
  if (!is_discrete(s.bath))
    throw Error(ErrorCode::Unsupported, "oracle comparison needs a discrete bath");
  const RunSettings& run = cfg.run;
  oracle::CutoffPlan plan;
  plan.n_sys = run.n_sys;
  plan.n_bath = run.n_bath;
  if (plan.n_bath.empty()) plan.n_bath.assign(bath_modes(s.bath).size(), 10);
  plan.dt = run.dt;
  plan.thermal_tail_tolerance = run.thermal_tail_tolerance;
  int n_max = run.n_max >= 0 ? run.n_max : (run.n_cut >= 0 ? run.n_cut : 8);
  n_max = std::min(n_max, plan.n_sys);

  const auto rho0 = oracle::initial_state(s, plan, cfg.gamma);
  oracle::EvolveReport report;
  const auto numeric = oracle::evolve_reduced(s, plan, rho0, run.t_grid, {}, &report);

  const CoefficientSet cs = propagate(s, run.t_grid);
  RhoOptions opts;
  opts.n_cut = run.n_cut >= n_max ? run.n_cut : -1;
  opts.min_n_cut = n_max;
  opts.s_max = run.s_max;

  CompareOutcome outcome;
  outcome.bound = run.max_deviation;
  std::ostringstream times;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const ReducedDensityMatrix analytic = rho_matrix(cs, i, cfg.gamma, opts);
    const double dev = oracle::compare(analytic, numeric[i], n_max);
    outcome.max_deviation = std::max(outcome.max_deviation, dev);
    times << "    {\"t\": " << format_double(cs.grid[i]) << ", \"max_deviation\": " << format_double(dev)
          << ", \"deviation\": [";
    for (int n = 0; n <= n_max; ++n)
      for (int m = 0; m <= n_max; ++m)
        times << ((n || m) ? ", " : "") << format_double(std::abs(analytic.rho(n, m) - numeric[i].rho(n, m)));
    times << "]}" << (i + 1 < cs.size() ? "," : "") << '\n';
  }
  outcome.passed = outcome.max_deviation <= outcome.bound;

  auto os = open_output(out, "oracle_compare.json", outcome.report);
  os << "{\n";
  write_scenario_json(os, cfg);
  os << "  \"cutoffs\": {\"n_sys\": " << plan.n_sys << ", \"n_bath\": [";
  for (std::size_t j = 0; j < plan.n_bath.size(); ++j) os << (j ? ", " : "") << plan.n_bath[j];
  os << "], \"dt\": " << format_double(report.dt) << ", \"halvings\": " << report.halvings
     << ", \"last_change\": " << format_double(report.last_change) << "},\n";
  os << "  \"n_max\": " << n_max << ",\n";
  os << "  \"times\": [\n" << times.str() << "  ],\n";
  os << "  \"max_deviation\": " << format_double(outcome.max_deviation) << ",\n";
  os << "  \"bound\": " << format_double(outcome.bound) << ",\n";
  os << "  \"pass\": " << (outcome.passed ? "true" : "false") << "\n}\n";
  return outcome;
}

}  // namespace rdm::cli
