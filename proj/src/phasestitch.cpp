#include "qhdlab/phasestitch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qhd {

double wrap_phase(double radians) {
  if (!std::isfinite(radians)) throw std::invalid_argument("phase must be finite");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(radians + std::numbers::pi, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - std::numbers::pi;
}

PhaseAssignment PhaseAssignment::uniform(const NodalDecomposition& dec, double phase) {
  PhaseAssignment out;
  for (int id = 1; id <= dec.component_count; ++id) out.set(id, phase);
  return out;
}

double PhaseAssignment::at(int component_id) const {
  auto it = phases_.find(component_id);
  if (it == phases_.end()) throw std::out_of_range("missing phase for component " + std::to_string(component_id));
  return it->second;
}

double PhaseAssignment::max_difference(const PhaseAssignment& other) const {
  if (phases_.size() != other.phases_.size()) throw std::invalid_argument("phase assignments cover different components");
  double worst = 0.0;
  for (const auto& [id, c] : phases_) worst = std::max(worst, std::abs(wrap_phase(c - other.at(id))));
  return worst;
}

std::string serialize(const PhaseAssignment& phases) {
  std::string out;
  for (const auto& [id, c] : phases.phases()) out += std::to_string(id) + ' ' + format_double(c) + '\n';
  return out;
}

PhaseAssignment parse_phase_assignment(const std::string& text) {
  PhaseAssignment out;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    int id = 0;
    double c = 0.0;
    std::string rest;
    if (!(row >> id >> c) || (row >> rest) || id < 1)
      throw std::invalid_argument("malformed phase line " + std::to_string(lineno));
    if (out.contains(id)) throw std::invalid_argument("duplicate component id at line " + std::to_string(lineno));
    out.set(id, c);
  }
  return out;
}

namespace {

// Multiplies by e^{iC}; quarter turns are applied as exact sign/swap
// operations so the modulus is untouched.
cplx rotate(cplx z, double c) {
  constexpr double snap = 1e-14;
  constexpr double pi = std::numbers::pi;
  if (std::abs(c) <= snap) return z;
  if (std::abs(c - pi) <= snap) return -z;
  if (std::abs(c - 0.5 * pi) <= snap) return {-z.imag(), z.real()};
  if (std::abs(c + 0.5 * pi) <= snap) return {z.imag(), -z.real()};
  return z * std::polar(1.0, c);
}

}  // namespace

WaveFunction stitch(const WaveFunction& psi, const NodalDecomposition& dec, const PhaseAssignment& phases) {
  if (dec.mode != NodalDecomposition::Mode::slice) throw std::invalid_argument("stitch needs a slice decomposition");
  if (!(dec.grid == psi.grid()) || dec.nx != psi.size()) throw std::invalid_argument("decomposition/grid mismatch");
  std::vector<double> table(static_cast<std::size_t>(dec.component_count) + 1, 0.0);
  for (int id = 1; id <= dec.component_count; ++id) {
    if (!phases.contains(id)) throw std::invalid_argument("missing phase for component " + std::to_string(id));
    table[static_cast<std::size_t>(id)] = phases.at(id);
  }
  // Vacuum nodes take the phase of the nearest labeled node (ties go
  // left), so sub-threshold tails rotate with their component and φ has
  // no artificial jump where ρ crosses the threshold.
  const std::size_t n = psi.size();
  std::vector<int> owner(n, 0);
  std::vector<std::size_t> dist(n, n);
  for (std::size_t j = 0, last = n; j < n; ++j) {
    if (dec.label(j) != 0) last = j;
    if (last != n) {
      owner[j] = dec.label(last);
      dist[j] = j - last;
    }
  }
  for (std::size_t j = n, next = n; j-- > 0;) {
    if (dec.label(j) != 0) next = j;
    if (next != n && next - j < dist[j]) owner[j] = dec.label(next);
  }
  ComplexField v(psi.values().begin(), psi.values().end());
  for (std::size_t j = 0; j < n; ++j) v[j] = rotate(v[j], table[static_cast<std::size_t>(owner[j])]);
  return WaveFunction(psi.grid(), std::move(v), psi.time());
}

H1Report h1_seminorm(const WaveFunction& phi, double jump_tol_rel) {
  H1Report r;
  const ComplexField d = spectral_derivative(phi);
  double acc = 0.0;
  for (const auto& v : d) acc += std::norm(v);
  r.seminorm = std::sqrt(acc * phi.grid().dx());

  double peak = 0.0;
  for (const auto& v : phi.values()) peak = std::max(peak, std::abs(v));
  for (std::size_t j = 1; j + 1 < phi.size(); ++j) {
    const double jump = std::abs(phi[j + 1] - phi[j - 1]);
    if (jump > r.max_jump) {
      r.max_jump = jump;
      r.jump_x = phi.grid().x(j);
    }
  }
  r.jump_flagged = peak > 0.0 && r.max_jump > jump_tol_rel * peak;
  return r;
}

double PhaseRecovery::max_dispersion() const {
  double worst = 0.0;
  for (const auto& c : components) worst = std::max(worst, c.dispersion);
  return worst;
}

PhaseRecovery recover_phases(const WaveFunction& psi, const WaveFunction& phi, const NodalDecomposition& dec,
                             const RecoveryOptions& options) {
  if (!(psi.grid() == phi.grid())) throw std::invalid_argument("grid mismatch");
  if (dec.mode != NodalDecomposition::Mode::slice || !(dec.grid == psi.grid()))
    throw std::invalid_argument("decomposition/grid mismatch");

  PhaseRecovery out;
  double mass = 0.0, diff = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double a = std::norm(psi[j]);
    mass += a;
    diff += std::abs(a - std::norm(phi[j]));
    peak = std::max(peak, a);
  }
  out.density_mismatch = mass > 0.0 ? diff / mass : diff;
  if (options.require_density_match && out.density_mismatch > options.density_match_tol)
    throw std::invalid_argument("density mismatch: recover_phases needs |psi|^2 == |phi|^2");

  const double floor = options.density_floor_rel * peak;
  const auto k = static_cast<std::size_t>(dec.component_count);
  std::vector<cplx> resultant(k + 1, 0.0);
  std::vector<std::size_t> count(k + 1, 0);
  auto unit_ratio = [&](std::size_t j) {
    const cplx z = phi[j] * std::conj(psi[j]);
    const double m = std::abs(z);
    return m > 0.0 ? z / m : cplx(0.0);
  };
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const int l = dec.label(j);
    if (l == 0 || std::norm(psi[j]) < floor) continue;
    resultant[static_cast<std::size_t>(l)] += unit_ratio(j);
    ++count[static_cast<std::size_t>(l)];
  }
  std::vector<double> sq_dev(k + 1, 0.0);
  std::vector<double> mean(k + 1, 0.0);
  for (std::size_t l = 1; l <= k; ++l) mean[l] = count[l] ? std::arg(resultant[l]) : 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const int l = dec.label(j);
    if (l == 0 || std::norm(psi[j]) < floor) continue;
    const auto li = static_cast<std::size_t>(l);
    const double dev = wrap_phase(std::arg(unit_ratio(j)) - mean[li]);
    sq_dev[li] += dev * dev;
  }

  PhaseAssignment assignment;
  for (std::size_t l = 1; l <= k; ++l) {
    ComponentPhase c;
    c.id = static_cast<int>(l);
    c.nodes_used = count[l];
    c.mean_phase = wrap_phase(mean[l]);
    // A component with no usable nodes carries no phase information.
    c.dispersion = count[l] ? std::sqrt(sq_dev[l] / static_cast<double>(count[l])) : std::numbers::pi;
    out.components.push_back(c);
    assignment.set(c.id, c.mean_phase);
    if (c.dispersion >= options.dispersion_tol && (!out.mismatch || c.dispersion > out.mismatch->dispersion))
      out.mismatch = PhaseMismatch{c.id, c.dispersion};
  }
  if (!out.mismatch) out.assignment = std::move(assignment);
  return out;
}

}  // namespace qhd
