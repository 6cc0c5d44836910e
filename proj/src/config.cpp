#include "qhdlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qhdlab/scenario.hpp"
#include "qhdlab/wavefield.hpp"

namespace qhd {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& v, std::size_t line, const std::string& key) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out))
    throw ConfigError(line, key + ": expected a finite number, got '" + v + "'");
  return out;
}

std::size_t parse_count(const std::string& v, std::size_t line, const std::string& key) {
  unsigned long long out = 0;
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError(line, key + ": expected a positive integer, got '" + v + "'");
  return static_cast<std::size_t>(out);
}

void require_positive(double v, std::size_t line, const std::string& key) {
  if (!(v > 0.0)) throw ConfigError(line, key + " must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "malformed line, expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key.find('.') == std::string::npos || value.empty())
      throw ConfigError(lineno, "malformed line, expected 'section.key = value'");

    if (key == "grid.L") {
      cfg.grid_L = parse_real(value, lineno, key);
      require_positive(cfg.grid_L, lineno, key);
    } else if (key == "grid.N") {
      cfg.grid_N = parse_count(value, lineno, key);
      if (cfg.grid_N % 2 != 0) throw ConfigError(lineno, "N must be even");
      if (cfg.grid_N < 8) throw ConfigError(lineno, "N must be at least 8");
    } else if (key == "time.dt") {
      cfg.time_dt = parse_real(value, lineno, key);
      require_positive(cfg.time_dt, lineno, key);
    } else if (key == "time.T") {
      cfg.time_T = parse_real(value, lineno, key);
      require_positive(cfg.time_T, lineno, key);
    } else if (key == "time.stride") {
      cfg.time_stride = parse_count(value, lineno, key);
      if (cfg.time_stride == 0) throw ConfigError(lineno, "time.stride must be positive");
    } else if (key == "potential.kind") {
      if (value != "harmonic" && value != "tabulated")
        throw ConfigError(lineno, "potential.kind must be harmonic or tabulated");
      cfg.potential_kind = value;
    } else if (key == "potential.file") {
      cfg.potential_file = value;
    } else if (key == "scenario.id") {
      if (!parse_scenario_id(value)) throw ConfigError(lineno, "unknown scenario '" + value + "'");
      cfg.scenario_id = value;
    } else if (key == "scenario.alpha") {
      cfg.scenario_alpha = parse_real(value, lineno, key);
    } else if (key == "nodal.eps_rel") {
      cfg.nodal_eps_rel = parse_real(value, lineno, key);
      if (!(cfg.nodal_eps_rel > 0.0 && cfg.nodal_eps_rel < 1.0))
        throw ConfigError(lineno, "nodal.eps_rel must lie in (0, 1)");
    } else if (key == "output.dir") {
      cfg.output_dir = value;
    } else {
      throw ConfigError(lineno, "unknown key '" + key + "'");
    }
  }
  if (cfg.potential_kind == "tabulated" && cfg.potential_file.empty())
    throw ConfigError(0, "potential.kind = tabulated requires potential.file");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(0, "cannot open config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "grid.L = " << format_double(cfg.grid_L) << '\n'
     << "grid.N = " << cfg.grid_N << '\n'
     << "time.dt = " << format_double(cfg.time_dt) << '\n'
     << "time.T = " << format_double(cfg.time_T) << '\n'
     << "time.stride = " << cfg.time_stride << '\n'
     << "potential.kind = " << cfg.potential_kind << '\n';
  if (!cfg.potential_file.empty()) os << "potential.file = " << cfg.potential_file << '\n';
  os << "scenario.id = " << cfg.scenario_id << '\n'
     << "scenario.alpha = " << format_double(cfg.scenario_alpha) << '\n'
     << "nodal.eps_rel = " << format_double(cfg.nodal_eps_rel) << '\n'
     << "output.dir = " << cfg.output_dir << '\n';
  return os.str();
}

}  // namespace qhd
