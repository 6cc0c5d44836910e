#include "qhdlab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qhd {
namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  // The smaller root survives, so roots are always the earliest scan index.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

void check_eps(double eps_rel) {
  if (!(eps_rel > 0.0 && eps_rel < 1.0)) throw std::invalid_argument("eps_rel must lie in (0, 1)");
}

// Labels a row-major nt x nx lattice of super-threshold flags with 4-adjacency.
void label_lattice(NodalDecomposition& dec, const std::vector<char>& occupied) {
  const std::size_t nx = dec.nx, nt = dec.nt, total = nx * nt;
  DisjointSet sets(total);
  for (std::size_t m = 0; m < nt; ++m) {
    for (std::size_t j = 0; j < nx; ++j) {
      const std::size_t i = m * nx + j;
      if (!occupied[i]) continue;
      if (j > 0 && occupied[i - 1]) sets.unite(i, i - 1);
      if (m > 0 && occupied[i - nx]) sets.unite(i, i - nx);
    }
  }

  dec.labels.assign(total, 0);
  std::unordered_map<std::size_t, int> root_to_id;
  for (std::size_t i = 0; i < total; ++i) {
    if (!occupied[i]) continue;
    const std::size_t root = sets.find(i);
    auto [it, inserted] = root_to_id.try_emplace(root, static_cast<int>(root_to_id.size()) + 1);
    const int id = it->second;
    dec.labels[i] = id;
    const std::size_t j = i % nx, m = i / nx;
    if (inserted) {
      dec.components.push_back({id, j, j, m, m, 0});
    }
    ComponentInfo& c = dec.components[static_cast<std::size_t>(id - 1)];
    c.x_lo = std::min(c.x_lo, j);
    c.x_hi = std::max(c.x_hi, j);
    c.t_lo = std::min(c.t_lo, m);
    c.t_hi = std::max(c.t_hi, m);
    ++c.size;
  }
  dec.component_count = static_cast<int>(dec.components.size());

  // Vacuum clusters and the labels bordering each of them.
  DisjointSet vac(total);
  for (std::size_t m = 0; m < nt; ++m) {
    for (std::size_t j = 0; j < nx; ++j) {
      const std::size_t i = m * nx + j;
      if (occupied[i]) continue;
      if (j > 0 && !occupied[i - 1]) vac.unite(i, i - 1);
      if (m > 0 && !occupied[i - nx]) vac.unite(i, i - nx);
    }
  }
  std::unordered_map<std::size_t, std::size_t> root_to_cluster;
  for (std::size_t i = 0; i < total; ++i) {
    if (occupied[i]) continue;
    const std::size_t root = vac.find(i);
    auto [it, inserted] = root_to_cluster.try_emplace(root, dec.vacuum_clusters.size());
    if (inserted) dec.vacuum_clusters.emplace_back();
    VacuumCluster& cl = dec.vacuum_clusters[it->second];
    cl.nodes.push_back(i);
    const std::size_t j = i % nx, m = i / nx;
    if (j == 0 || j + 1 == nx) cl.touches_spatial_edge = true;
    auto note = [&](std::size_t k) {
      const int l = dec.labels[k];
      if (l != 0 && std::find(cl.adjacent_labels.begin(), cl.adjacent_labels.end(), l) == cl.adjacent_labels.end())
        cl.adjacent_labels.push_back(l);
    };
    if (j > 0) note(i - 1);
    if (j + 1 < nx) note(i + 1);
    if (m > 0) note(i - nx);
    if (m + 1 < nt) note(i + nx);
  }
  for (auto& cl : dec.vacuum_clusters) std::sort(cl.adjacent_labels.begin(), cl.adjacent_labels.end());
}

}  // namespace

std::size_t NodalDecomposition::isolated_zero_count() const {
  return static_cast<std::size_t>(
      std::count_if(vacuum_clusters.begin(), vacuum_clusters.end(), [](const VacuumCluster& c) { return c.isolated(); }));
}

NodalDecomposition slice_components(const Grid1D& grid, std::span<const double> rho, double eps_rel, double t) {
  check_eps(eps_rel);
  if (rho.size() != grid.size()) throw std::invalid_argument("density length does not match grid");
  double peak = 0.0;
  for (double r : rho) {
    if (r < 0.0 || !std::isfinite(r)) throw std::invalid_argument("density must be finite and nonnegative");
    peak = std::max(peak, r);
  }
  if (peak == 0.0) throw std::invalid_argument("all-vacuum input");

  NodalDecomposition dec;
  dec.mode = NodalDecomposition::Mode::slice;
  dec.grid = grid;
  dec.times = {t};
  dec.nx = rho.size();
  dec.nt = 1;
  dec.eps_rel = eps_rel;
  dec.threshold = eps_rel * peak;
  std::vector<char> occupied(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) occupied[j] = rho[j] > dec.threshold;
  label_lattice(dec, occupied);
  return dec;
}

NodalDecomposition spacetime_components(const Grid1D& grid, std::span<const RealField> stack,
                                        std::span<const double> times, double eps_rel) {
  check_eps(eps_rel);
  if (stack.size() < 2) throw std::invalid_argument("space-time analysis needs at least 2 slices");
  if (times.size() != stack.size()) throw std::invalid_argument("one time per slice required");
  const double step = times[1] - times[0];
  if (!(step > 0.0)) throw std::invalid_argument("slice times must be increasing");
  for (std::size_t m = 1; m < times.size(); ++m)
    if (std::abs((times[m] - times[m - 1]) - step) > 1e-6 * step)
      throw std::invalid_argument("slice times must be uniformly spaced");

  double peak = 0.0;
  for (const auto& slice : stack) {
    if (slice.size() != grid.size()) throw std::invalid_argument("density length does not match grid");
    for (double r : slice) {
      if (r < 0.0 || !std::isfinite(r)) throw std::invalid_argument("density must be finite and nonnegative");
      peak = std::max(peak, r);
    }
  }
  if (peak == 0.0) throw std::invalid_argument("all-vacuum input");

  NodalDecomposition dec;
  dec.mode = NodalDecomposition::Mode::spacetime;
  dec.grid = grid;
  dec.times.assign(times.begin(), times.end());
  dec.nx = grid.size();
  dec.nt = stack.size();
  dec.eps_rel = eps_rel;
  dec.threshold = eps_rel * peak;
  std::vector<char> occupied(dec.nx * dec.nt);
  for (std::size_t m = 0; m < dec.nt; ++m)
    for (std::size_t j = 0; j < dec.nx; ++j) occupied[m * dec.nx + j] = stack[m][j] > dec.threshold;
  label_lattice(dec, occupied);
  return dec;
}

InterfaceAnalysis interface_flux(std::span<const WaveFunction> psi_stack, const NodalDecomposition& dec) {
  if (dec.mode != NodalDecomposition::Mode::spacetime)
    throw std::invalid_argument("interface_flux needs a space-time decomposition");
  if (dec.component_count < 2) throw std::invalid_argument("no interface");
  if (psi_stack.size() != dec.nt) throw std::invalid_argument("wavefunction stack does not match decomposition");
  const std::size_t nx = dec.nx, nt = dec.nt;

  std::vector<RealField> rho(nt);
  for (std::size_t m = 0; m < nt; ++m) {
    if (!(psi_stack[m].grid() == dec.grid)) throw std::invalid_argument("grid mismatch");
    rho[m].resize(nx);
    for (std::size_t j = 0; j < nx; ++j) rho[m][j] = std::norm(psi_stack[m][j]);
  }
  // Lattice-unit gradient: a time step counts as one node, same as dx.
  auto grad = [&](std::size_t j, std::size_t m) {
    double gx, gt;
    if (j == 0) gx = rho[m][1] - rho[m][0];
    else if (j + 1 == nx) gx = rho[m][j] - rho[m][j - 1];
    else gx = 0.5 * (rho[m][j + 1] - rho[m][j - 1]);
    if (m == 0) gt = rho[1][j] - rho[0][j];
    else if (m + 1 == nt) gt = rho[m][j] - rho[m - 1][j];
    else gt = 0.5 * (rho[m + 1][j] - rho[m - 1][j]);
    return std::pair{gx, gt};
  };

  std::vector<ComplexField> dpsi(nt);
  InterfaceAnalysis out;
  std::size_t space_like_votes = 0;
  for (std::size_t m = 0; m < nt; ++m) {
    for (std::size_t j = 0; j < nx; ++j) {
      if (dec.label(j, m) != 0) continue;
      std::vector<std::pair<std::size_t, std::size_t>> nbrs;
      if (j > 0) nbrs.emplace_back(j - 1, m);
      if (j + 1 < nx) nbrs.emplace_back(j + 1, m);
      if (m > 0) nbrs.emplace_back(j, m - 1);
      if (m + 1 < nt) nbrs.emplace_back(j, m + 1);
      std::vector<int> seen;
      for (auto [jj, mm] : nbrs) {
        const int l = dec.label(jj, mm);
        if (l != 0 && std::find(seen.begin(), seen.end(), l) == seen.end()) seen.push_back(l);
      }
      if (seen.size() < 2) continue;
      std::sort(seen.begin(), seen.end());
      const int a = seen[0], b = seen[1];

      double ux = 0.0, ut = 0.0;
      for (auto [jj, mm] : nbrs) {
        const int l = dec.label(jj, mm);
        if (l != a && l != b) continue;
        const double sign = l == a ? 1.0 : -1.0;
        auto [gx, gt] = grad(jj, mm);
        ux += sign * gx;
        ut += sign * gt;
      }
      const double len = std::hypot(ux, ut);
      if (!(len > 0.0)) {
        ++out.degenerate_normals;
        continue;
      }
      ux /= len;
      ut /= len;
      if (dpsi[m].empty()) dpsi[m] = spectral_derivative(psi_stack[m]);

      InterfaceSample s;
      s.j = j;
      s.m = m;
      s.x = dec.grid.x(j);
      s.t = dec.times[m];
      s.label_a = a;
      s.label_b = b;
      s.upsilon_x = ux;
      s.upsilon_t = ut;
      s.flux = dpsi[m][j] * ux;
      if (std::abs(ut) > std::abs(ux)) ++space_like_votes;
      out.samples.push_back(s);
    }
  }
  if (!out.samples.empty()) {
    out.space_like = 2 * space_like_votes > out.samples.size();
    out.min_abs_flux = std::abs(out.samples.front().flux);
    out.max_abs_flux = out.min_abs_flux;
    for (const auto& s : out.samples) {
      out.min_abs_flux = std::min(out.min_abs_flux, std::abs(s.flux));
      out.max_abs_flux = std::max(out.max_abs_flux, std::abs(s.flux));
    }
  }
  return out;
}

void write_topology_report(std::ostream& os, const NodalDecomposition& dec) {
  os << "mode: " << (dec.mode == NodalDecomposition::Mode::slice ? "slice" : "spacetime") << '\n';
  os << "eps_rel: " << format_double(dec.eps_rel) << '\n';
  os << "threshold: " << format_double(dec.threshold) << '\n';
  os << "grid: nx=" << dec.nx << " nt=" << dec.nt << '\n';
  os << "K: " << dec.component_count << '\n';
  os << "components:\n";
  for (const auto& c : dec.components) {
    os << "  [" << c.id << ", x=[" << format_double(dec.grid.x(c.x_lo)) << ", " << format_double(dec.grid.x(c.x_hi))
       << "], t=[" << format_double(dec.times[c.t_lo]) << ", " << format_double(dec.times[c.t_hi]) << "], " << c.size
       << "]\n";
  }
  std::size_t separating = 0;
  for (const auto& cl : dec.vacuum_clusters)
    if (cl.separating()) ++separating;
  os << "separating_vacuum_clusters: " << separating << '\n';
  os << "isolated_zeros: " << dec.isolated_zero_count() << '\n';
  for (const auto& cl : dec.vacuum_clusters) {
    if (!cl.isolated()) continue;
    const std::size_t i = cl.nodes.front();
    os << "  (x=" << format_double(dec.grid.x(i % dec.nx)) << ", t=" << format_double(dec.times[i / dec.nx])
       << ", nodes=" << cl.nodes.size() << ")\n";
  }
}

std::string topology_report(const NodalDecomposition& dec) {
  std::ostringstream os;
  write_topology_report(os, dec);
  return os.str();
}

void write_label_csv(std::ostream& os, const NodalDecomposition& dec) {
  os << "t,x,label\n";
  for (std::size_t m = 0; m < dec.nt; ++m)
    for (std::size_t j = 0; j < dec.nx; ++j)
      os << format_double(dec.times[m]) << ',' << format_double(dec.grid.x(j)) << ',' << dec.label(j, m) << '\n';
}

}  // namespace qhd
