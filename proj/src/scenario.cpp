#include "qhdlab/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

namespace qhd {

std::optional<ScenarioId> parse_scenario_id(std::string_view name) {
  if (name == "prop2_nodal_drop") return ScenarioId::prop2_nodal_drop;
  if (name == "prop8_eigenstate_interface") return ScenarioId::prop8_eigenstate_interface;
  if (name == "gauge_control") return ScenarioId::gauge_control;
  return std::nullopt;
}

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::prop2_nodal_drop: return "prop2_nodal_drop";
    case ScenarioId::prop8_eigenstate_interface: return "prop8_eigenstate_interface";
    case ScenarioId::gauge_control: return "gauge_control";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::non_unique_witnessed: return "NON-UNIQUE WITNESSED";
    case Verdict::control_identical: return "CONTROL-IDENTICAL";
    case Verdict::no_witness: return "NO WITNESS FOUND";
  }
  return "unknown";
}

Verdict expected_verdict(ScenarioId id) {
  return id == ScenarioId::gauge_control ? Verdict::control_identical : Verdict::non_unique_witnessed;
}

cplx two_level_state(double x, double t) {
  const cplx i(0.0, 1.0);
  return std::exp(-0.5 * i * t - 0.5 * x * x) * (1.0 - (1.0 - 2.0 * x * x) * std::exp(-2.0 * i * t));
}

cplx first_excited_state(double x, double t) { return x * std::polar(std::exp(-0.5 * x * x), -1.5 * t); }

bool NonuniquenessReport::residuals_passed() const {
  return psi_continuity.passed && psi_momentum.passed && phi_continuity.passed && phi_momentum.passed;
}

Potential make_potential(const RunConfig& cfg, const Grid1D& grid) {
  if (cfg.potential_kind == "harmonic") return Potential::harmonic();
  std::ifstream is(cfg.potential_file);
  if (!is) throw std::runtime_error("cannot open potential file " + cfg.potential_file);
  std::string line;
  std::getline(is, line);
  RealField samples;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    double x = 0.0, v = 0.0;
    char comma = 0;
    if (!(row >> x >> comma >> v) || comma != ',')
      throw std::runtime_error("malformed potential row at line " + std::to_string(lineno));
    if (samples.size() < grid.size() && std::abs(x - grid.x(samples.size())) > 1e-9 * grid.half_length())
      throw std::runtime_error("potential file x column does not match the grid");
    samples.push_back(v);
  }
  if (samples.size() != grid.size()) throw std::runtime_error("potential file must have one row per grid node");
  return Potential::tabulated(std::move(samples));
}

namespace {

double max_stationarity(const Trajectory& traj) {
  double worst = 0.0;
  const double dx = traj.grid.dx();
  for (const auto& s : traj.samples) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.rho.size(); ++j) acc += std::abs(s.rho[j] - traj.samples.front().rho[j]);
    worst = std::max(worst, acc * dx);
  }
  return worst;
}

Verdict decide(const NonuniquenessReport& r) {
  const bool same_start =
      r.distances.d_rho.front() < initial_data_threshold && r.distances.d_current.front() < initial_data_threshold;
  if (!same_start) return Verdict::no_witness;
  if (r.distances.max_rho() > witness_threshold && r.residuals_passed()) return Verdict::non_unique_witnessed;
  if (r.distances.max_rho() < identical_threshold && r.distances.max_current() < identical_threshold)
    return Verdict::control_identical;
  return Verdict::no_witness;
}

}  // namespace

NonuniquenessReport nonuniqueness_report(const RunConfig& cfg) {
  const auto id = parse_scenario_id(cfg.scenario_id);
  if (!id) throw std::invalid_argument("unknown scenario '" + cfg.scenario_id + "'");

  NonuniquenessReport r;
  r.scenario = *id;
  r.config = cfg;
  const Grid1D grid = make_grid(cfg.grid_L, cfg.grid_N);
  const Potential potential = make_potential(cfg, grid);

  const WaveFunction seed = *id == ScenarioId::prop8_eigenstate_interface
                                ? WaveFunction::sample(grid, [](double x) { return first_excited_state(x, 0.0); })
                                : WaveFunction::sample(grid, [](double x) { return two_level_state(x, 0.0); });

  r.initial_slice = slice_components(grid, density(seed), cfg.nodal_eps_rel, 0.0);
  if (*id == ScenarioId::gauge_control) {
    r.seed_phases = PhaseAssignment::uniform(r.initial_slice, cfg.scenario_alpha);
  } else {
    // C_1 = 0 on the first component, α on every other one.
    for (int c = 1; c <= r.initial_slice.component_count; ++c) r.seed_phases.set(c, c == 1 ? 0.0 : cfg.scenario_alpha);
  }
  const WaveFunction stitched = stitch(seed, r.initial_slice, r.seed_phases);

  const std::string seed_name = *id == ScenarioId::prop8_eigenstate_interface ? "psi1" : "psi0-psi2";
  auto phi_future = std::async(std::launch::async, [&] {
    return run_trajectory(stitched, potential, cfg.time_T, cfg.time_dt, cfg.time_stride,
                          "stitched(" + seed_name + ")/split-step");
  });
  r.psi = run_trajectory(seed, potential, cfg.time_T, cfg.time_dt, cfg.time_stride, seed_name + "/split-step");
  r.phi = phi_future.get();
  r.dt_used = r.psi.dt;

  r.final_slice = slice_components(grid, r.psi.samples.back().rho, cfg.nodal_eps_rel, r.psi.times.back());
  r.spacetime = spacetime_components(grid, r.psi.density_stack(), r.psi.times, cfg.nodal_eps_rel);
  if (r.spacetime.component_count >= 2) r.interface = interface_flux(r.psi.states, r.spacetime);

  r.distances = trajectory_distance(r.psi, r.phi);
  r.psi_stationarity = max_stationarity(r.psi);

  const TestFunctionBank bank = default_test_bank(cfg.time_T);
  r.psi_continuity = continuity_residual(r.psi, bank);
  r.psi_momentum = momentum_residual(r.psi, potential, bank);
  r.phi_continuity = continuity_residual(r.phi, bank);
  r.phi_momentum = momentum_residual(r.phi, potential, bank);

  r.initial_recovery = recover_phases(seed, stitched, r.initial_slice);
  RecoveryOptions at_final;
  at_final.require_density_match = false;
  r.final_recovery = recover_phases(r.psi.states.back(), r.phi.states.back(), r.final_slice, at_final);

  r.verdict = decide(r);
  return r;
}

namespace {

void write_recovery(std::ostream& os, const std::string& tag, const PhaseRecovery& rec) {
  os << tag << ".density_mismatch = " << format_double(rec.density_mismatch) << '\n';
  for (const auto& c : rec.components)
    os << tag << ".component " << c.id << " mean_phase=" << format_double(c.mean_phase)
       << " dispersion=" << format_double(c.dispersion) << " nodes=" << c.nodes_used << '\n';
  if (rec.ok())
    os << tag << ".status = recovered\n";
  else
    os << tag << ".status = mismatch component=" << rec.mismatch->component_id
       << " dispersion=" << format_double(rec.mismatch->dispersion) << '\n';
}

void write_residual(std::ostream& os, const std::string& tag, const ResidualReport& r) {
  os << tag << " max_abs=" << format_double(r.max_abs) << " tol=" << format_double(r.tolerance)
     << " status=" << (r.passed ? "PASS" : "FAIL") << '\n';
  for (std::size_t i = 0; i < r.values.size(); ++i) os << "  " << tag << '[' << i << "] = " << format_double(r.values[i]) << '\n';
}

}  // namespace

std::string render_report(const NonuniquenessReport& r) {
  std::ostringstream os;
  const RunConfig& c = r.config;
  os << "SCENARIO\n"
     << "id = " << to_string(r.scenario) << '\n'
     << "seed = " << r.psi.provenance << '\n'
     << "stitched = " << r.phi.provenance << '\n'
     << "grid.L = " << format_double(c.grid_L) << '\n'
     << "grid.N = " << c.grid_N << '\n'
     << "time.T = " << format_double(c.time_T) << '\n'
     << "time.dt_requested = " << format_double(c.time_dt) << '\n'
     << "time.dt_used = " << format_double(r.dt_used) << '\n'
     << "time.stride = " << c.time_stride << '\n'
     << "samples = " << r.psi.size() << '\n'
     << "potential = " << c.potential_kind << '\n'
     << "alpha = " << format_double(c.scenario_alpha) << '\n'
     << "nodal.eps_rel = " << format_double(c.nodal_eps_rel) << '\n'
     << "seed_phases:\n"
     << serialize(r.seed_phases) << '\n';

  os << "TOPOLOGY\n"
     << "N_0 = " << r.initial_slice.component_count << '\n'
     << "N_T = " << r.final_slice.component_count << '\n'
     << "spacetime_K = " << r.spacetime.component_count << '\n'
     << "spacetime_isolated_zeros = " << r.spacetime.isolated_zero_count() << '\n'
     << "nodal_drop (N_T < N_0) = " << (r.final_slice.component_count < r.initial_slice.component_count ? "yes" : "no")
     << '\n'
     << "spacetime_below_N_0 (K < N_0) = "
     << (r.spacetime.component_count < r.initial_slice.component_count ? "yes" : "no") << '\n';
  if (r.interface) {
    const auto& fi = *r.interface;
    os << "interface_samples = " << fi.samples.size() << '\n'
       << "interface_degenerate_normals = " << fi.degenerate_normals << '\n'
       << "interface_space_like = " << (fi.space_like ? "yes" : "no") << '\n'
       << "interface_min_abs_flux = " << format_double(fi.min_abs_flux) << '\n'
       << "interface_max_abs_flux = " << format_double(fi.max_abs_flux) << '\n';
  } else {
    os << "interface_samples = 0\n";
  }
  os << "psi_stationarity = " << format_double(r.psi_stationarity) << '\n' << '\n';

  os << "DISTANCES\n"
     << "d_rho(0) = " << format_double(r.distances.d_rho.front()) << '\n'
     << "d_J(0) = " << format_double(r.distances.d_current.front()) << '\n'
     << "d_rho(T) = " << format_double(r.distances.d_rho.back()) << '\n'
     << "d_J(T) = " << format_double(r.distances.d_current.back()) << '\n'
     << "max_d_rho = " << format_double(r.distances.max_rho()) << '\n'
     << "max_d_J = " << format_double(r.distances.max_current()) << '\n'
     << "curve: t d_rho d_J\n";
  for (std::size_t m = 0; m < r.distances.times.size(); ++m)
    os << "  " << format_double(r.distances.times[m]) << ' ' << format_double(r.distances.d_rho[m]) << ' '
       << format_double(r.distances.d_current[m]) << '\n';
  os << '\n';

  os << "RESIDUALS\n"
     << "bank = " << r.psi_continuity.bank_id << " (" << r.psi_continuity.values.size() << " functions)\n";
  write_residual(os, "psi.continuity", r.psi_continuity);
  write_residual(os, "psi.momentum", r.psi_momentum);
  write_residual(os, "phi.continuity", r.phi_continuity);
  write_residual(os, "phi.momentum", r.phi_momentum);
  os << '\n';

  os << "PHASES\n";
  write_recovery(os, "t0", r.initial_recovery);
  write_recovery(os, "tT", r.final_recovery);
  os << '\n';

  os << "VERDICT\n"
     << to_string(r.verdict) << '\n'
     << "expected = " << to_string(expected_verdict(r.scenario)) << '\n';
  return os.str();
}

int run_scenario(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const NonuniquenessReport report = nonuniqueness_report(cfg);

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + cfg.output_dir);

  auto write = [&](const std::string& name, auto&& emit) {
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    emit(os);
    if (!os) throw std::runtime_error("failed writing " + (dir / name).string());
  };
  write("traj_psi.csv", [&](std::ostream& os) { write_trajectory_csv(os, report.psi); });
  write("traj_phi.csv", [&](std::ostream& os) { write_trajectory_csv(os, report.phi); });
  write("topology.txt", [&](std::ostream& os) {
    os << "# t = 0 slice\n";
    write_topology_report(os, report.initial_slice);
    os << "\n# t = T slice\n";
    write_topology_report(os, report.final_slice);
    os << "\n# space-time [0, T]\n";
    write_topology_report(os, report.spacetime);
  });
  write("report.txt", [&](std::ostream& os) { os << render_report(report); });
  return report.verdict == expected_verdict(report.scenario) ? 0 : 2;
}

}  // namespace qhd
