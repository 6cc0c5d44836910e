#include "qhdlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qhdlab/propagator.hpp"

namespace qhd {

std::vector<RealField> Trajectory::density_stack() const {
  std::vector<RealField> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.rho);
  return out;
}

StepSchedule schedule_steps(double T, double dt, std::size_t stride) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be finite and nonnegative");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (stride == 0) throw std::invalid_argument("stride must be positive");
  if (T == 0.0) return {dt, 0};
  const double ratio = T / dt;
  const double nearest = std::round(ratio);
  const auto s = static_cast<double>(stride);
  if (nearest > 0.0 && std::abs(ratio - nearest) <= 1e-9 * ratio && std::fmod(nearest, s) == 0.0)
    return {dt, static_cast<std::size_t>(nearest)};
  const double blocks = std::ceil(ratio / s - 1e-9);
  const auto nsteps = static_cast<std::size_t>(std::max(1.0, blocks)) * stride;
  return {T / static_cast<double>(nsteps), nsteps};
}

Trajectory run_trajectory(const WaveFunction& psi0, const Potential& potential, double T, double dt, std::size_t stride,
                          std::string provenance) {
  const StepSchedule sched = schedule_steps(T, dt, stride);
  Trajectory traj;
  traj.grid = psi0.grid();
  traj.dt = sched.dt;
  traj.stride = stride;
  traj.provenance = std::move(provenance);

  const double t0 = psi0.time();
  WaveFunction psi = psi0;
  auto record = [&](std::size_t m) {
    psi.set_time(t0 + static_cast<double>(m * stride) * sched.dt);
    traj.times.push_back(psi.time());
    traj.samples.push_back(density_pair(psi));
    traj.energies.push_back(energy_and_mass(psi, potential));
    traj.states.push_back(psi);
  };
  record(0);
  if (sched.nsteps > 0) {
    const SplitStepPropagator prop(psi0.grid(), potential, sched.dt);
    const std::size_t nsamples = sched.nsteps / stride;
    for (std::size_t m = 1; m <= nsamples; ++m) {
      prop.advance(psi, stride);
      record(m);
    }
  }

  const double m0 = traj.energies.front().mass;
  for (const auto& e : traj.energies)
    if (m0 > 0.0 && std::abs(e.mass - m0) > 1e-10 * m0)
      throw std::runtime_error("propagation failure: mass drift exceeds 1e-10");
  return traj;
}

namespace {

double bump(double tau) { return std::abs(tau) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - tau * tau)) : 0.0; }

double bump_slope(double tau) {
  if (std::abs(tau) >= 1.0) return 0.0;
  const double q = 1.0 - tau * tau;
  return bump(tau) * (-2.0 * tau / (q * q));
}

}  // namespace

double TestFunction::value(double x, double t) const {
  const double u = x - x0;
  return std::exp(-u * u / (2.0 * width_x * width_x)) * bump((t - t0) / half_width_t);
}

double TestFunction::d_t(double x, double t) const {
  const double u = x - x0;
  return std::exp(-u * u / (2.0 * width_x * width_x)) * bump_slope((t - t0) / half_width_t) / half_width_t;
}

double TestFunction::d_x(double x, double t) const {
  const double u = x - x0, s2 = width_x * width_x;
  return -u / s2 * std::exp(-u * u / (2.0 * s2)) * bump((t - t0) / half_width_t);
}

double TestFunction::d_xxx(double x, double t) const {
  const double u = x - x0, s2 = width_x * width_x;
  const double poly = 3.0 * u / (s2 * s2) - u * u * u / (s2 * s2 * s2);
  return poly * std::exp(-u * u / (2.0 * s2)) * bump((t - t0) / half_width_t);
}

TestFunctionBank default_test_bank(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("test bank needs T > 0");
  TestFunctionBank bank{"gauss4x2-bump", {}};
  for (double tc : {T / 3.0, 2.0 * T / 3.0})
    for (double xc : {-1.5, -0.5, 0.5, 1.5}) bank.functions.push_back({xc, 0.75, tc, T / 3.0});
  return bank;
}

namespace {

void check_residual_inputs(const Trajectory& traj, const TestFunctionBank& bank) {
  if (bank.functions.empty()) throw std::invalid_argument("test-function bank is empty");
  if (traj.size() < 3) throw std::invalid_argument("residual needs at least 3 samples");
  if (traj.times.size() != traj.size()) throw std::invalid_argument("trajectory times do not match samples");
}

// Trapezoid weight for sample m of M (uniform spacing h).
double trapezoid_weight(std::size_t m, std::size_t count, double h) {
  return (m == 0 || m + 1 == count) ? 0.5 * h : h;
}

ResidualReport finish(ResidualReport r, const Trajectory& traj, const TestFunctionBank& bank, double tol) {
  r.bank_id = bank.id;
  r.tolerance = tol;
  r.nx = traj.grid.size();
  r.nsamples = traj.size();
  r.sample_spacing = traj.sample_spacing();
  r.max_abs = 0.0;
  bool finite = true;
  for (double v : r.values) {
    finite = finite && std::isfinite(v);
    r.max_abs = std::max(r.max_abs, std::abs(v));
  }
  r.passed = finite && r.max_abs < tol;
  return r;
}

}  // namespace

ResidualReport continuity_residual(const Trajectory& traj, const TestFunctionBank& bank, double tolerance) {
  check_residual_inputs(traj, bank);
  const Grid1D& g = traj.grid;
  const double h = traj.sample_spacing(), dx = g.dx();
  ResidualReport r;
  r.equation = ResidualReport::Equation::continuity;
  for (const auto& w : bank.functions) {
    double acc = 0.0;
    for (std::size_t m = 0; m < traj.size(); ++m) {
      const double t = traj.times[m];
      const auto& s = traj.samples[m];
      double row = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        row += s.rho[j] * w.d_t(x, t) + s.current[j] * w.d_x(x, t);
      }
      acc += trapezoid_weight(m, traj.size(), h) * row * dx;
    }
    r.values.push_back(acc);
  }
  return finish(std::move(r), traj, bank, tolerance);
}

ResidualReport momentum_residual(const Trajectory& traj, const Potential& potential, const TestFunctionBank& bank,
                                 double tolerance) {
  check_residual_inputs(traj, bank);
  const Grid1D& g = traj.grid;
  const std::size_t n = g.size();
  const double h = traj.sample_spacing(), dx = g.dx();
  const RealField v_x = potential.gradient(g);
  const bool have_states = traj.states.size() == traj.size();

  // Per-sample convective flux (J²/ρ)_reg and osmotic term (∂_x√ρ)².
  std::vector<RealField> convective(traj.size(), RealField(n, 0.0));
  std::vector<RealField> osmotic(traj.size(), RealField(n, 0.0));
  for (std::size_t m = 0; m < traj.size(); ++m) {
    const auto& s = traj.samples[m];
    const double floor = default_vacuum_floor(s.rho);
    if (have_states) {
      const WaveFunction& psi = traj.states[m];
      const ComplexField d = spectral_derivative(psi);
      // |ψ_x|² = (∂_x√ρ)² + J²/ρ holds pointwise; using it keeps the
      // osmotic term correct on nodes, where it tends to |ψ_x|², not 0.
      for (std::size_t j = 0; j < n; ++j) {
        if (s.rho[j] >= floor && s.rho[j] > 0.0) convective[m][j] = s.current[j] * s.current[j] / s.rho[j];
        osmotic[m][j] = std::norm(d[j]) - convective[m][j];
      }
    } else {
      RealField amp(n);
      for (std::size_t j = 0; j < n; ++j) amp[j] = std::sqrt(s.rho[j]);
      const RealField amp_x = spectral_derivative(g, amp);
      for (std::size_t j = 0; j < n; ++j) {
        if (!(s.rho[j] >= floor) || s.rho[j] == 0.0) continue;
        osmotic[m][j] = amp_x[j] * amp_x[j];
        convective[m][j] = s.current[j] * s.current[j] / s.rho[j];
      }
    }
  }

  ResidualReport r;
  r.equation = ResidualReport::Equation::momentum;
  for (const auto& w : bank.functions) {
    double acc = 0.0;
    for (std::size_t m = 0; m < traj.size(); ++m) {
      const double t = traj.times[m];
      const auto& s = traj.samples[m];
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double x = g.x(j);
        const double wx = w.d_x(x, t);
        row += s.current[j] * w.d_t(x, t) + (convective[m][j] + osmotic[m][j]) * wx -
               s.rho[j] * v_x[j] * w.value(x, t) - 0.25 * s.rho[j] * w.d_xxx(x, t);
      }
      acc += trapezoid_weight(m, traj.size(), h) * row * dx;
    }
    r.values.push_back(acc);
  }
  return finish(std::move(r), traj, bank, tolerance);
}

double DistanceCurve::max_rho() const { return d_rho.empty() ? 0.0 : *std::max_element(d_rho.begin(), d_rho.end()); }

double DistanceCurve::max_current() const {
  return d_current.empty() ? 0.0 : *std::max_element(d_current.begin(), d_current.end());
}

DistanceCurve trajectory_distance(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("sampling mismatch: grids differ");
  if (a.size() != b.size()) throw std::invalid_argument("sampling mismatch: sample counts differ");
  DistanceCurve out;
  const double dx = a.grid.dx();
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (std::abs(a.times[m] - b.times[m]) > 1e-12 * std::max(1.0, std::abs(a.times[m])))
      throw std::invalid_argument("sampling mismatch: sample times differ");
    double dr = 0.0, dj = 0.0;
    for (std::size_t j = 0; j < a.grid.size(); ++j) {
      dr += std::abs(a.samples[m].rho[j] - b.samples[m].rho[j]);
      dj += std::abs(a.samples[m].current[j] - b.samples[m].current[j]);
    }
    out.times.push_back(a.times[m]);
    out.d_rho.push_back(dr * dx);
    out.d_current.push_back(dj * dx);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,rho,J\n";
  for (std::size_t m = 0; m < traj.size(); ++m) {
    const std::string t = format_double(traj.times[m]);
    for (std::size_t j = 0; j < traj.grid.size(); ++j)
      os << t << ',' << format_double(traj.grid.x(j)) << ',' << format_double(traj.samples[m].rho[j]) << ','
         << format_double(traj.samples[m].current[j]) << '\n';
  }
}

}  // namespace qhd
