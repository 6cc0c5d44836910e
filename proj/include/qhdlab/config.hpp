#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qhd {

struct RunConfig {
  double grid_L = 10.0;
  std::size_t grid_N = 1024;
  double time_dt = 1e-3;
  double time_T = std::numbers::pi / 4.0;
  std::size_t time_stride = 8;
  std::string potential_kind = "harmonic";
  std::string potential_file;  // CSV `x,V`, only for potential.kind = tabulated
  std::string scenario_id = "prop2_nodal_drop";
  double scenario_alpha = std::numbers::pi;
  double nodal_eps_rel = 1e-10;
  std::string output_dir = "out";
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// `section.key = value` lines, `#` starts a comment. Unknown keys,
/// malformed lines and out-of-range values raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical `section.key = value` rendering (round-trips through parse_config).
std::string render_config(const RunConfig& cfg);

}  // namespace qhd
