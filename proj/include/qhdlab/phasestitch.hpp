#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qhdlab/nodal.hpp"
#include "qhdlab/wavefield.hpp"

namespace qhd {

/// Wraps an angle into (−π, π].
double wrap_phase(double radians);

/// Per-component phase constants C_k, stored in (−π, π].
class PhaseAssignment {
 public:
  PhaseAssignment() = default;

  /// Every component of dec gets the same phase.
  static PhaseAssignment uniform(const NodalDecomposition& dec, double phase);

  void set(int component_id, double radians) { phases_[component_id] = wrap_phase(radians); }
  double at(int component_id) const;
  bool contains(int component_id) const { return phases_.contains(component_id); }
  std::size_t size() const { return phases_.size(); }
  const std::map<int, double>& phases() const { return phases_; }

  /// Largest |C_k − C'_k| modulo 2π; throws if the id sets differ.
  double max_difference(const PhaseAssignment& other) const;

 private:
  std::map<int, double> phases_;
};

/// `component_id phase_radians` lines.
std::string serialize(const PhaseAssignment& phases);
PhaseAssignment parse_phase_assignment(const std::string& text);

/// φ = ψ e^{iC_label}; vacuum nodes use the label of the nearest labeled node.
/// Phases at multiples of π/2 rotate exactly, so |φ|² == |ψ|² bit for bit there.
WaveFunction stitch(const WaveFunction& psi, const NodalDecomposition& decomposition, const PhaseAssignment& phases);

struct H1Report {
  double seminorm = 0.0;   // ‖∇φ‖_{L²}, spectral
  double max_jump = 0.0;   // max_j |φ_{j+1} − φ_{j−1}|
  double jump_x = 0.0;     // node where max_jump occurs
  bool jump_flagged = false;
};

/// Spectral H¹ seminorm plus a two-cell jump detector. A jump is flagged
/// when it exceeds jump_tol_rel · max|φ|; smooth fields on resolved grids
/// stay near 2·dx·max|φ'|.
H1Report h1_seminorm(const WaveFunction& phi, double jump_tol_rel = 0.25);

struct ComponentPhase {
  int id = 0;
  double mean_phase = 0.0;  // circular mean of arg(φ/ψ)
  double dispersion = 0.0;  // RMS wrapped deviation about the mean, radians
  std::size_t nodes_used = 0;
};

struct PhaseMismatch {
  int component_id = 0;
  double dispersion = 0.0;
};

struct PhaseRecovery {
  std::vector<ComponentPhase> components;
  double density_mismatch = 0.0;  // Σ|ρ_ψ − ρ_φ| / Σρ_ψ
  std::optional<PhaseAssignment> assignment;  // set when every component is consistent
  std::optional<PhaseMismatch> mismatch;      // worst offending component otherwise

  bool ok() const { return assignment.has_value(); }
  double max_dispersion() const;
};

struct RecoveryOptions {
  double dispersion_tol = 1e-6;
  double density_floor_rel = 1e-6;  // nodes with ρ below this·max ρ are skipped
  double density_match_tol = 1e-10;
  bool require_density_match = true;  // throw when |ψ|² and |φ|² differ
};

PhaseRecovery recover_phases(const WaveFunction& psi, const WaveFunction& phi, const NodalDecomposition& decomposition,
                             const RecoveryOptions& options = {});

}  // namespace qhd
