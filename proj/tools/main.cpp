#include <CLI11.hpp>
#include <iostream>

#include "rdmgen/cli.hpp"
#include "rdmgen/io.hpp"

namespace {

using namespace rdm;

int dispatch(const std::string& verb, const std::string& config_path, const std::string& out_flag,
             const std::vector<std::string>& override_flags) {
  std::vector<Override> overrides;
  for (const auto& o : override_flags) overrides.push_back(parse_override(o));

  const bool figure = verb == "fig1" || verb == "fig2" || verb == "fig3";
  RunConfig cfg;
  if (!config_path.empty())
    cfg = load_config(config_path, overrides);
  else if (figure)
    cfg = parse_config(cli::preset_text(verb), overrides);
  else
    throw Error(ErrorCode::ConfigError, "--config: required for '" + verb + "'");

  const cli::fs::path out = out_flag.empty() ? cli::fs::path(cfg.run.output_dir) : cli::fs::path(out_flag);
  if (verb == "oracle-compare") {
    const auto outcome = cli::cmd_oracle_compare(cfg, out);
    std::cout << outcome.report.string() << '\n'
              << "max deviation " << format_double(outcome.max_deviation) << " (bound "
              << format_double(outcome.bound) << "): " << (outcome.passed ? "pass" : "FAIL") << '\n';
    return outcome.passed ? cli::kExitOk : cli::kExitComparisonFailed;
  }
  cli::fs::path written;
  if (verb == "coeffs") written = cli::cmd_coeffs(cfg, out);
  else if (verb == "pn") written = cli::cmd_pn(cfg, out);
  else if (verb == "rho") written = cli::cmd_rho(cfg, out);
  else written = cli::cmd_fig(verb, cfg, out);
  std::cout << written.string() << '\n';
  return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced density matrices of a driven, damped quadratic oscillator"};
  std::string verb, config_path, out;
  std::vector<std::string> overrides;
  app.add_option("command", verb, "coeffs | pn | rho | oracle-compare | fig1 | fig2 | fig3")
      ->required()
      ->check(CLI::IsMember({"coeffs", "pn", "rho", "oracle-compare", "fig1", "fig2", "fig3"}));
  app.add_option("--config", config_path, "scenario file");
  app.add_option("--out", out, "output directory (default: run.output_dir)");
  app.add_option("--override", overrides, "section.key=value, may be repeated");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  try {
    return dispatch(verb, config_path, out, overrides);
  } catch (const Error& e) {
    std::cerr << "rdmgen: " << e.what() << '\n';
    return cli::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "rdmgen: " << e.what() << '\n';
    return cli::kExitConfig;
  }
}
