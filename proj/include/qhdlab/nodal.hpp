#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qhdlab/wavefield.hpp"

namespace qhd {

struct ComponentInfo {
  int id = 0;
  std::size_t x_lo = 0, x_hi = 0;  // inclusive node indices
  std::size_t t_lo = 0, t_hi = 0;  // inclusive slice indices
  std::size_t size = 0;
};

// A 4-connected cluster of vacuum nodes together with the component labels
// it touches. Clusters touching exactly one label and not reaching the
// spatial edges of the lattice are isolated zeros, never interfaces.
struct VacuumCluster {
  std::vector<std::size_t> nodes;  // flat indices m * nx + j
  std::vector<int> adjacent_labels;
  bool touches_spatial_edge = false;

  bool isolated() const { return !touches_spatial_edge && adjacent_labels.size() == 1; }
  bool separating() const { return adjacent_labels.size() >= 2; }
};

/// Connected components of {ρ > eps_rel · max ρ} on one slice or over (x, t).
/// Labels are 0 for vacuum and 1..K by first occurrence in scan order
/// (t-major, then x ascending).
struct NodalDecomposition {
  enum class Mode { slice, spacetime };

  Mode mode = Mode::slice;
  Grid1D grid;
  std::vector<double> times;  // one entry per slice
  std::size_t nx = 0;
  std::size_t nt = 0;
  std::vector<int> labels;  // row-major [t][x]
  int component_count = 0;
  double eps_rel = 0.0;
  double threshold = 0.0;  // eps_rel · max ρ
  std::vector<ComponentInfo> components;
  std::vector<VacuumCluster> vacuum_clusters;

  int label(std::size_t j, std::size_t m = 0) const { return labels[m * nx + j]; }
  std::size_t isolated_zero_count() const;
};

NodalDecomposition slice_components(const Grid1D& grid, std::span<const double> rho, double eps_rel, double t = 0.0);

/// Union-find labeling with 4-adjacency over the (x, t) lattice.
/// stack[m] is ρ at times[m]; times must be uniformly spaced.
NodalDecomposition spacetime_components(const Grid1D& grid, std::span<const RealField> stack,
                                        std::span<const double> times, double eps_rel);

struct InterfaceSample {
  std::size_t j = 0, m = 0;
  double x = 0.0, t = 0.0;
  int label_a = 0, label_b = 0;  // Υ points into label_a (the smaller id)
  double upsilon_x = 0.0;
  double upsilon_t = 0.0;
  cplx flux;  // ψ_x · Υ_x at the sample
};

struct InterfaceAnalysis {
  std::vector<InterfaceSample> samples;
  std::size_t degenerate_normals = 0;  // interface nodes whose ρ-gradient cancelled
  bool space_like = false;             // |Υ_t| > |Υ_x| on a majority of samples
  double min_abs_flux = 0.0;
  double max_abs_flux = 0.0;
};

/// Samples ∇ψ·Υ_x at vacuum nodes that separate two space-time components.
/// The normal comes from ρ-gradients at the labeled 4-neighbours in lattice
/// units (time axis rescaled by dx/dt), oriented into the smaller label.
InterfaceAnalysis interface_flux(std::span<const WaveFunction> psi_stack, const NodalDecomposition& decomposition);

/// Plain-text topology block (mode, eps_rel, K, components: [id, bbox, size]).
void write_topology_report(std::ostream& os, const NodalDecomposition& dec);
std::string topology_report(const NodalDecomposition& dec);

/// CSV `t,x,label`.
void write_label_csv(std::ostream& os, const NodalDecomposition& dec);

}  // namespace qhd
