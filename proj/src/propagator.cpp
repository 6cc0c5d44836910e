#include "qhdlab/propagator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qhdlab/fft.hpp"

namespace qhd {

SplitStepPropagator::SplitStepPropagator(const Grid1D& grid, const Potential& potential, double dt)
    : grid_(grid), dt_(dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("dt must be finite and nonzero");
  const std::size_t n = grid.size();
  const RealField v = potential.values(grid);
  half_potential_phase_.resize(n);
  kinetic_phase_.resize(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    half_potential_phase_[j] = std::polar(1.0, -0.5 * v[j] * dt);
    const double k = grid.wavenumber(j);
    kinetic_phase_[j] = std::polar(inv_n, -0.5 * k * k * dt);
  }
}

void SplitStepPropagator::advance(WaveFunction& psi, std::size_t nsteps) const {
  if (!(psi.grid() == grid_)) throw std::invalid_argument("grid mismatch");
  if (nsteps == 0) return;
  auto values = psi.values();
  const std::size_t n = values.size();
  for (std::size_t s = 0; s < nsteps; ++s) {
    for (std::size_t j = 0; j < n; ++j) values[j] *= half_potential_phase_[j];
    fft::forward(values);
    for (std::size_t j = 0; j < n; ++j) values[j] *= kinetic_phase_[j];
    fft::inverse(values);
    for (std::size_t j = 0; j < n; ++j) values[j] *= half_potential_phase_[j];
  }
  psi.set_time(psi.time() + dt_ * static_cast<double>(nsteps));
  if (!psi.all_finite()) throw std::runtime_error("split-step propagation produced non-finite values");
}

WaveFunction split_step(const WaveFunction& psi, const Potential& potential, double dt, std::size_t nsteps) {
  if (!psi.all_finite()) throw std::invalid_argument("field contains non-finite values");
  SplitStepPropagator prop(psi.grid(), potential, dt);
  WaveFunction out = psi;
  prop.advance(out, nsteps);
  return out;
}

namespace {

// Walks h_0..h_nmax with the normalized recurrence, calling visit(n, h_n).
template <typename Visit>
void for_each_hermite(const Grid1D& grid, std::size_t nmax, Visit&& visit) {
  const std::size_t npts = grid.size();
  RealField prev(npts, 0.0);
  RealField cur(npts);
  const double norm0 = std::pow(std::numbers::pi, -0.25);
  for (std::size_t j = 0; j < npts; ++j) {
    const double x = grid.x(j);
    cur[j] = norm0 * std::exp(-0.5 * x * x);
  }
  visit(std::size_t{0}, static_cast<const RealField&>(cur));
  RealField next(npts);
  for (std::size_t n = 0; n < nmax; ++n) {
    const double a = std::sqrt(2.0 / static_cast<double>(n + 1));
    const double b = std::sqrt(static_cast<double>(n) / static_cast<double>(n + 1));
    for (std::size_t j = 0; j < npts; ++j) next[j] = a * grid.x(j) * cur[j] - b * prev[j];
    std::swap(prev, cur);
    std::swap(cur, next);
    visit(n + 1, static_cast<const RealField&>(cur));
  }
}

void require_resolved(const Grid1D& grid, std::size_t nmax) {
  // h_n oscillates with local wavenumber up to √(2n+1); the quadrature of
  // h_n·ψ needs that to stay below half the grid Nyquist wavenumber.
  const double kmax = std::sqrt(2.0 * static_cast<double>(nmax) + 1.0);
  const double nyquist = std::numbers::pi / grid.dx();
  if (kmax >= 0.5 * nyquist) throw std::invalid_argument("nmax too large for grid: Hermite recurrence under-resolved");
}

}  // namespace

std::vector<RealField> hermite_functions(const Grid1D& grid, std::size_t nmax) {
  require_resolved(grid, nmax);
  std::vector<RealField> out;
  out.reserve(nmax + 1);
  for_each_hermite(grid, nmax, [&](std::size_t, const RealField& h) { out.push_back(h); });
  return out;
}

HermiteCoeffs hermite_project(const WaveFunction& psi, std::size_t nmax) {
  const Grid1D& grid = psi.grid();
  require_resolved(grid, nmax);
  HermiteCoeffs out{grid, std::vector<cplx>(nmax + 1), psi.time(), 0.0};
  const double dx = grid.dx();
  double captured = 0.0;
  for_each_hermite(grid, nmax, [&](std::size_t n, const RealField& h) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) acc += h[j] * psi[j];
    out.coefficients[n] = acc * dx;
    captured += std::norm(out.coefficients[n]);
  });
  out.tail_mass = std::abs(norm_squared(psi) - captured);
  return out;
}

WaveFunction hermite_evolve(const HermiteCoeffs& coeffs, double t) {
  const Grid1D& grid = coeffs.grid;
  ComplexField values(grid.size(), 0.0);
  const double elapsed = t - coeffs.reference_time;
  for_each_hermite(grid, coeffs.nmax(), [&](std::size_t n, const RealField& h) {
    const cplx c = coeffs.coefficients[n] * std::polar(1.0, -oscillator_energy(n) * elapsed);
    for (std::size_t j = 0; j < h.size(); ++j) values[j] += c * h[j];
  });
  return WaveFunction(grid, std::move(values), t);
}

}  // namespace qhd
