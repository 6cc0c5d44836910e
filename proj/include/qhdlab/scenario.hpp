#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "qhdlab/config.hpp"
#include "qhdlab/nodal.hpp"
#include "qhdlab/phasestitch.hpp"
#include "qhdlab/trajectory.hpp"

namespace qhd {

enum class ScenarioId { prop2_nodal_drop, prop8_eigenstate_interface, gauge_control };

std::optional<ScenarioId> parse_scenario_id(std::string_view name);
std::string_view to_string(ScenarioId id);

enum class Verdict { non_unique_witnessed, control_identical, no_witness };
std::string_view to_string(Verdict v);
Verdict expected_verdict(ScenarioId id);

// Closed-form harmonic-oscillator solutions used as seeds and references.
// two_level_state is ψ₀ − ψ₂ = e^{−it/2 − x²/2}(1 − (1 − 2x²)e^{−2it}).
cplx two_level_state(double x, double t);
cplx first_excited_state(double x, double t);  // x e^{−3it/2} e^{−x²/2}

inline constexpr double witness_threshold = 1e-6;    // max_t d_ρ above this is a divergence
inline constexpr double identical_threshold = 1e-8;  // max_t d_ρ, d_J below this is identical
inline constexpr double initial_data_threshold = 1e-12;

struct NonuniquenessReport {
  ScenarioId scenario = ScenarioId::prop2_nodal_drop;
  RunConfig config;
  double dt_used = 0.0;
  PhaseAssignment seed_phases;

  Trajectory psi;
  Trajectory phi;

  NodalDecomposition initial_slice;
  NodalDecomposition final_slice;
  NodalDecomposition spacetime;
  std::optional<InterfaceAnalysis> interface;  // only when spacetime K >= 2

  DistanceCurve distances;
  double psi_stationarity = 0.0;  // max_t ‖ρ_ψ(t) − ρ_ψ(0)‖_{L¹}

  ResidualReport psi_continuity, psi_momentum, phi_continuity, phi_momentum;
  PhaseRecovery initial_recovery;
  PhaseRecovery final_recovery;

  Verdict verdict = Verdict::no_witness;

  bool residuals_passed() const;
};

Potential make_potential(const RunConfig& cfg, const Grid1D& grid);

/// Runs the paired trajectories and all analyses for cfg.scenario_id.
NonuniquenessReport nonuniqueness_report(const RunConfig& cfg);

/// Fixed section headers: SCENARIO, TOPOLOGY, DISTANCES, RESIDUALS, PHASES, VERDICT.
std::string render_report(const NonuniquenessReport& report);

/// Writes traj_psi.csv, traj_phi.csv, topology.txt and report.txt into
/// cfg.output_dir. Returns 0 when the verdict matches the scenario's
/// expectation, 2 otherwise. Throws on runtime failure.
int run_scenario(const RunConfig& cfg);

}  // namespace qhd
