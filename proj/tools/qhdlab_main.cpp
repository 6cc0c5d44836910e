// qhdlab: scenario runner and analysis front-end.
//
//   qhdlab run <config>        paired trajectories + verdict report
//   qhdlab evolve <config>     evolve the scenario seed only
//   qhdlab topology <field>    nodal components of a field dump
//   qhdlab version
//
// Exit codes: 0 success (verdict as expected), 2 unexpected verdict, 1 failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qhdlab/config.hpp"
#include "qhdlab/nodal.hpp"
#include "qhdlab/observables.hpp"
#include "qhdlab/scenario.hpp"
#include "qhdlab/trajectory.hpp"
#include "qhdlab/wavefield.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  const qhd::RunConfig cfg = qhd::load_config(config_path);
  const int status = qhd::run_scenario(cfg);
  std::ifstream report(std::filesystem::path(cfg.output_dir) / "report.txt");
  std::string line, last_header, verdict;
  while (std::getline(report, line)) {
    if (last_header == "VERDICT" && verdict.empty()) verdict = line;
    if (line == "VERDICT") last_header = line;
  }
  std::cout << "VERDICT " << verdict << '\n';
  if (status != 0) std::cerr << "qhdlab: verdict does not match the scenario expectation\n";
  return status;
}

int cmd_evolve(const std::string& config_path) {
  namespace fs = std::filesystem;
  const qhd::RunConfig cfg = qhd::load_config(config_path);
  const auto id = qhd::parse_scenario_id(cfg.scenario_id);
  const qhd::Grid1D grid = qhd::make_grid(cfg.grid_L, cfg.grid_N);
  const qhd::Potential potential = qhd::make_potential(cfg, grid);
  const auto seed = *id == qhd::ScenarioId::prop8_eigenstate_interface
                        ? qhd::WaveFunction::sample(grid, [](double x) { return qhd::first_excited_state(x, 0.0); })
                        : qhd::WaveFunction::sample(grid, [](double x) { return qhd::two_level_state(x, 0.0); });
  const qhd::Trajectory traj =
      qhd::run_trajectory(seed, potential, cfg.time_T, cfg.time_dt, cfg.time_stride, "seed/split-step");

  fs::create_directories(cfg.output_dir);
  std::ofstream csv(fs::path(cfg.output_dir) / "traj_psi.csv");
  if (!csv) throw std::runtime_error("cannot write into " + cfg.output_dir);
  qhd::write_trajectory_csv(csv, traj);
  qhd::write_field_csv((fs::path(cfg.output_dir) / "psi_T.csv").string(), traj.states.back());

  const auto& e0 = traj.energies.front();
  const auto& e1 = traj.energies.back();
  std::cout << "samples " << traj.size() << " dt_used " << qhd::format_double(traj.dt) << '\n'
            << "mass " << qhd::format_double(e0.mass) << " -> " << qhd::format_double(e1.mass) << '\n'
            << "energy " << qhd::format_double(e0.total) << " -> " << qhd::format_double(e1.total) << '\n';
  return 0;
}

int cmd_topology(const std::string& field_path, double eps_rel, const std::string& labels_path) {
  const qhd::WaveFunction psi = qhd::read_field_csv(field_path);
  const auto dec = qhd::slice_components(psi.grid(), qhd::density(psi), eps_rel, psi.time());
  qhd::write_topology_report(std::cout, dec);
  if (!labels_path.empty()) {
    std::ofstream os(labels_path);
    if (!os) throw std::runtime_error("cannot write " + labels_path);
    qhd::write_label_csv(os, dec);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-hydrodynamics nodal non-uniqueness laboratory"};
  app.require_subcommand(1);

  std::string config_path, field_path, labels_path;
  double eps_rel = 1e-10;

  auto* run = app.add_subcommand("run", "Run a scenario and write traj/topology/report files");
  run->add_option("config", config_path, "config file")->required();
  auto* evolve = app.add_subcommand("evolve", "Evolve the scenario seed and dump its trajectory");
  evolve->add_option("config", config_path, "config file")->required();
  auto* topology = app.add_subcommand("topology", "Nodal components of a field CSV (x,re_psi,im_psi)");
  topology->add_option("field", field_path, "field dump")->required();
  topology->add_option("--eps-rel", eps_rel, "relative vacuum threshold");
  topology->add_option("--labels", labels_path, "write the label grid CSV here");
  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*evolve) return cmd_evolve(config_path);
    if (*topology) return cmd_topology(field_path, eps_rel, labels_path);
    std::cout << "qhdlab " << QHDLAB_VERSION << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "qhdlab: " << e.what() << '\n';
    return 1;
  }
}
