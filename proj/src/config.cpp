#include "rdmgen/config.hpp"

#include <algorithm>
#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rdm {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::ConfigError, path + ": " + message);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"system", {"omega0", "phi_re", "phi_im", "beta"}},
      {"drive", {"type", "k0", "nu", "samples"}},
      {"bath", {"type", "modes", "chi0"}},
      {"initial", {"gamma_re", "gamma_im"}},
      {"run",
       {"t_grid", "t_end", "steps", "n_cut", "s_max", "outputs", "output_dir", "n_sys", "n_bath", "dt",
        "max_deviation", "n_max", "thermal_tail_tolerance", "pn_max", "eta_max", "eta_steps"}},
  };
  return keys;
}

const std::set<std::string> kOutputs{"coeffs", "pn", "rho", "oracle-compare", "fig1", "fig2", "fig3"};

double to_double(const std::string& path, std::string text) {
  boost::trim(text);
  const std::string lower = boost::to_lower_copy(text);
  if (lower == "inf" || lower == "+inf" || lower == "infinity") return kInf;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    fail(path, "expected a number, got '" + text + "'");
  return value;
}

int to_int(const std::string& path, std::string text) {
  boost::trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    fail(path, "expected an integer, got '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, const char* separators) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(separators));
  for (auto& p : parts) boost::trim(p);
  std::erase_if(parts, [](const std::string& p) { return p.empty(); });
  return parts;
}

// Rows separated by ';' or '|', fields by ','.
std::vector<std::vector<double>> table(const std::string& path, const std::string& text, std::size_t width) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(text, ";|")) {
    const auto fields = split(row, ",");
    if (fields.size() != width)
      fail(path, "row '" + row + "' needs " + std::to_string(width) + " comma-separated values");
    std::vector<double> values;
    for (const auto& f : fields) values.push_back(to_double(path, f));
    rows.push_back(std::move(values));
  }
  return rows;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return boost::trim_copy(*v);
  }
  double number(const std::string& section, const std::string& key, double fallback) const {
    auto v = raw(section, key);
    return v ? to_double(section + "." + key, *v) : fallback;
  }
  double required_number(const std::string& section, const std::string& key) const {
    auto v = raw(section, key);
    if (!v) fail(section + "." + key, "required");
    return to_double(section + "." + key, *v);
  }
  int integer(const std::string& section, const std::string& key, int fallback) const {
    auto v = raw(section, key);
    return v ? to_int(section + "." + key, *v) : fallback;
  }
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const {
    return raw(section, key).value_or(fallback);
  }

 private:
  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) fail(section, "unknown section");
    if (!body.data().empty()) fail(section, "value outside a section");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) fail(section + "." + key, "unknown key");
  }
}

void apply_override(pt::ptree& tree, const Override& o) {
  const auto dot = o.path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == o.path.size())
    fail(o.path, "override path must be section.key");
  tree.put(pt::ptree::path_type(o.path, '.'), o.value);
}

DriveSpec read_drive(const Reader& r) {
  const std::string type = r.text("drive", "type", "zero");
  if (type == "zero") return ZeroDrive{};
  if (type == "sinusoidal")
    return SinusoidalDrive{r.required_number("drive", "k0"), r.required_number("drive", "nu")};
  if (type == "tabulated") {
    auto samples = r.raw("drive", "samples");
    if (!samples) fail("drive.samples", "required for a tabulated drive");
    TabulatedDrive tab;
    for (const auto& row : table("drive.samples", *samples, 3)) {
      tab.t.push_back(row[0]);
      tab.k.emplace_back(row[1], row[2]);
    }
    return tab;
  }
  fail("drive.type", "expected zero, sinusoidal or tabulated, got '" + type + "'");
}

BathSpec read_bath(const Reader& r) {
  const std::string type = r.text("bath", "type", "none");
  if (type == "none") return NoBath{};
  if (type == "memoryless") return MemorylessBath{r.required_number("bath", "chi0")};
  if (type == "discrete") {
    auto modes = r.raw("bath", "modes");
    if (!modes) fail("bath.modes", "required for a discrete bath");
    DiscreteBath bath;
    for (const auto& row : table("bath.modes", *modes, 3)) bath.modes.push_back({row[0], {row[1], row[2]}});
    return bath;
  }
  fail("bath.type", "expected none, discrete or memoryless, got '" + type + "'");
}

std::vector<double> read_grid(const Reader& r) {
  if (auto grid = r.raw("run", "t_grid")) {
    if (r.raw("run", "t_end")) fail("run.t_end", "give either t_grid or t_end + steps");
    std::vector<double> out;
    for (const auto& f : split(*grid, ",; ")) out.push_back(to_double("run.t_grid", f));
    if (out.empty()) fail("run.t_grid", "empty grid");
    return out;
  }
  const double t_end = r.number("run", "t_end", 0.0);
  const int steps = r.integer("run", "steps", r.raw("run", "t_end") ? 100 : 0);
  if (steps < 0) fail("run.steps", "must be >= 0");
  if (steps == 0) return {0.0};
  std::vector<double> out(steps + 1);
  for (int i = 0; i <= steps; ++i) out[i] = t_end * i / steps;
  return out;
}

RunConfig from_tree(pt::ptree tree, const std::vector<Override>& overrides) {
  for (const auto& o : overrides) apply_override(tree, o);
  check_keys(tree);
  const Reader r(tree);

  RunConfig cfg;
  SystemSpec& s = cfg.spec;
  s.omega0 = r.number("system", "omega0", 1.0);
  s.phi = {r.number("system", "phi_re", 0.0), r.number("system", "phi_im", 0.0)};
  s.beta = r.number("system", "beta", kInf);
  s.drive = read_drive(r);
  s.bath = read_bath(r);
  cfg.gamma = {r.number("initial", "gamma_re", 0.0), r.number("initial", "gamma_im", 0.0)};

  RunSettings& run = cfg.run;
  run.t_grid = read_grid(r);
  for (std::size_t i = 0; i < run.t_grid.size(); ++i)
    if (run.t_grid[i] < 0.0 || (i && run.t_grid[i] <= run.t_grid[i - 1]))
      fail("run.t_grid", "times must be >= 0 and strictly increasing");
  run.n_cut = r.integer("run", "n_cut", -1);
  run.s_max = r.integer("run", "s_max", -1);
  if (auto outs = r.raw("run", "outputs")) {
    run.outputs = split(*outs, ", ");
    for (const auto& o : run.outputs)
      if (!kOutputs.count(o)) fail("run.outputs", "unknown output '" + o + "'");
  }
  run.output_dir = r.text("run", "output_dir", ".");
  run.n_sys = r.integer("run", "n_sys", 14);
  if (auto nb = r.raw("run", "n_bath"))
    for (const auto& f : split(*nb, ", ")) run.n_bath.push_back(to_int("run.n_bath", f));
  run.dt = r.number("run", "dt", 0.0);
  run.max_deviation = r.number("run", "max_deviation", 1e-4);
  run.n_max = r.integer("run", "n_max", -1);
  run.thermal_tail_tolerance = r.number("run", "thermal_tail_tolerance", 1e-10);
  run.pn_max = r.integer("run", "pn_max", 4);
  if (run.pn_max < 0) fail("run.pn_max", "must be >= 0");
  run.eta_max = r.number("run", "eta_max", 2.0);
  if (!(run.eta_max >= 0.0)) fail("run.eta_max", "must be >= 0");
  run.eta_steps = r.integer("run", "eta_steps", 200);
  if (run.eta_steps < 1) fail("run.eta_steps", "must be >= 1");

  try {
    cfg.spec = validate_spec(cfg.spec);
  } catch (const SpecError& e) {
    std::string message;
    for (const auto& issue : e.issues()) message += (message.empty() ? "" : "; ") + issue.field + ": " + issue.message;
    throw Error(ErrorCode::ConfigError, message);
  }
  return cfg;
}

}  // namespace

Override parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) fail(text, "override must look like section.key=value");
  return {boost::trim_copy(text.substr(0, eq)), boost::trim_copy(text.substr(eq + 1))};
}

RunConfig parse_config(const std::string& text, const std::vector<Override>& overrides) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail("line " + std::to_string(e.line()), e.message());
  }
  return from_tree(std::move(tree), overrides);
}

RunConfig load_config(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace rdm
