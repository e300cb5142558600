#include "tme/experiment.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tme/csv_io.hpp"

namespace tme {

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("not a boolean: '" + std::string(v) + "'");
}

std::size_t parse_count(std::string_view v) {
  const long long n = parse_integer(v);
  if (n < 0) throw std::runtime_error("expected a non-negative integer");
  return static_cast<std::size_t>(n);
}

// Grid fields are collected first and the grids rebuilt once the whole
// [kernel] section is known.
struct Draft {
  ExperimentConfig cfg;
  std::size_t n_points;
  double half_width;
  bool kernel_section = false;
  bool has_fiber_keys = false;
};

using Setter = std::function<void(Draft&, std::string_view)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"kernel",
       {
           {"coeff_signal", [](Draft& d, std::string_view v) {
              d.cfg.kernel.coeff_signal = parse_double(v); d.has_fiber_keys = true; }},
           {"coeff_idler", [](Draft& d, std::string_view v) {
              d.cfg.kernel.coeff_idler = parse_double(v); d.has_fiber_keys = true; }},
           {"chirp_strength", [](Draft& d, std::string_view v) {
              d.cfg.kernel.chirp_strength = parse_double(v); d.has_fiber_keys = true; }},
           {"n_points", [](Draft& d, std::string_view v) { d.n_points = parse_count(v); }},
           {"half_width", [](Draft& d, std::string_view v) { d.half_width = parse_double(v); }},
           {"custom_file", [](Draft& d, std::string_view v) {
              if (v.empty()) throw std::runtime_error("empty path");
              d.cfg.custom_kernel = std::filesystem::path(std::string(v)); }},
       }},
      {"filter",
       {
           {"signal_band", [](Draft& d, std::string_view v) { d.cfg.signal_band = parse_double(v); }},
           {"idler_band", [](Draft& d, std::string_view v) { d.cfg.idler_band = parse_double(v); }},
       }},
      {"iteration",
       {
           {"max_steps", [](Draft& d, std::string_view v) {
              d.cfg.iteration.max_steps = static_cast<int>(parse_integer(v)); }},
           {"overlap_tolerance", [](Draft& d, std::string_view v) {
              d.cfg.iteration.overlap_tolerance = parse_double(v); }},
           {"shaper_gain", [](Draft& d, std::string_view v) {
              d.cfg.iteration.shaper_gain = parse_double(v); }},
           {"seed_center", [](Draft& d, std::string_view v) {
              d.cfg.iteration.seed.center = parse_double(v); }},
           {"seed_width", [](Draft& d, std::string_view v) {
              d.cfg.iteration.seed.width = parse_double(v); }},
           {"degeneracy_window", [](Draft& d, std::string_view v) {
              d.cfg.iteration.degeneracy_window = static_cast<int>(parse_integer(v)); }},
           {"start_side", [](Draft& d, std::string_view v) {
              if (v == "signal") d.cfg.iteration.start_side = Side::Signal;
              else if (v == "idler") d.cfg.iteration.start_side = Side::Idler;
              else throw std::runtime_error("start_side must be 'signal' or 'idler'"); }},
       }},
      {"run",
       {
           {"modes", [](Draft& d, std::string_view v) { d.cfg.modes_requested = parse_count(v); }},
           {"tau_points", [](Draft& d, std::string_view v) { d.cfg.tau_points = parse_count(v); }},
           {"output_dir", [](Draft& d, std::string_view v) {
              if (v.empty()) throw std::runtime_error("empty path");
              d.cfg.output_dir = std::filesystem::path(std::string(v)); }},
           {"emit_modes", [](Draft& d, std::string_view v) { d.cfg.emit.modes = parse_bool(v); }},
           {"emit_time_profiles", [](Draft& d, std::string_view v) {
              d.cfg.emit.time_profiles = parse_bool(v); }},
           {"emit_convergence", [](Draft& d, std::string_view v) {
              d.cfg.emit.convergence = parse_bool(v); }},
           {"emit_mode_numbers", [](Draft& d, std::string_view v) {
              d.cfg.emit.mode_numbers = parse_bool(v); }},
           {"emit_kernel", [](Draft& d, std::string_view v) {
              d.cfg.emit.kernel_dump = parse_bool(v); }},
       }},
  };
  return s;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.modes_requested < 1) throw ConfigError(0, "modes must be at least 1");
  if (cfg.tau_points < 3 || cfg.tau_points % 2 == 0) {
    throw ConfigError(0, "tau_points must be odd and at least 3");
  }
  for (const auto& band : {cfg.signal_band, cfg.idler_band}) {
    if (band && !(*band > 0.0)) throw ConfigError(0, "filter band must be positive");
  }
  try {
    cfg.iteration.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base,
                              bool require_kernel_section) {
  Draft d{base, base.kernel.signal_grid.n_points(), base.kernel.signal_grid.half_width()};
  std::set<std::string> seen;
  std::string section;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().contains(section)) throw ConfigError(line_no, "unknown section [" + section + "]");
      if (section == "kernel") d.kernel_section = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    if (section.empty()) throw ConfigError(line_no, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    const auto& keys = schema().at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(line_no, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError(line_no, "repeated key '" + key + "'");
    }
    try {
      it->second(d, value);
    } catch (const std::exception& e) {
      throw ConfigError(line_no, key + ": " + e.what());
    }
  }

  if (require_kernel_section && !d.kernel_section) throw ConfigError(0, "missing required [kernel] section");
  if (d.cfg.custom_kernel && d.has_fiber_keys) {
    throw ConfigError(0, "custom_file cannot be combined with fiber kernel coefficients");
  }
  try {
    d.cfg.kernel.signal_grid = make_grid(d.n_points, d.half_width);
    d.cfg.kernel.idler_grid = make_grid(d.n_points, d.half_width);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  validate(d.cfg);
  return d.cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path, const ExperimentConfig& base,
                                   bool require_kernel_section) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str(), base, require_kernel_section);
  if (cfg.custom_kernel && cfg.custom_kernel->is_relative()) {
    cfg.custom_kernel = path.parent_path() / *cfg.custom_kernel;
  }
  return cfg;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig3", "fig4", "fig5", "fig6", "fig7"};
  return names;
}

std::string preset_text(std::string_view name) {
  // fig3/fig5: mode functions; fig4/fig6: mode numbers; fig7: convergence.
  // fig5/fig6 add the quadratic pump chirp.
  const bool chirped = name == "fig5" || name == "fig6";
  const bool modes = name == "fig3" || name == "fig5";
  const bool numbers = name == "fig4" || name == "fig6";
  const bool curves = name == "fig7";
  if (!(modes || numbers || curves)) {
    throw ConfigError(0, "unknown preset '" + std::string(name) + "'");
  }
  auto flag = [](bool b) { return b ? "true" : "false"; };
  std::ostringstream t;
  t << "[kernel]\n"
    << "coeff_signal = 0.125\n"
    << "coeff_idler = -0.075\n"
    << "chirp_strength = " << (chirped ? 1 : 0) << "\n"
    << "[run]\n"
    << "modes = 3\n"
    << "output_dir = " << name << "\n"
    << "emit_modes = " << flag(modes) << "\n"
    << "emit_time_profiles = " << flag(modes) << "\n"
    << "emit_mode_numbers = " << flag(numbers) << "\n"
    << "emit_convergence = " << flag(curves) << "\n";
  return t.str();
}

ExperimentConfig preset_config(std::string_view name) { return parse_config(preset_text(name)); }

}  // namespace tme
