#pragma once

#include <cstddef>
#include <vector>

#include "qhdlab/wavefield.hpp"

namespace qhd {

// Strang-split pseudospectral propagator for i ψ_t = -½ψ_xx + Vψ.
// Phase tables are built once; advance() can be called repeatedly.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid1D& grid, const Potential& potential, double dt);

  double dt() const { return dt_; }
  const Grid1D& grid() const { return grid_; }

  // Advances psi in place by nsteps steps of size dt.
  void advance(WaveFunction& psi, std::size_t nsteps) const;

 private:
  Grid1D grid_;
  double dt_;
  ComplexField half_potential_phase_;
  ComplexField kinetic_phase_;  // includes the 1/N of the inverse FFT
};

// Negative dt evolves backward in time. nsteps == 0 returns psi unchanged.
WaveFunction split_step(const WaveFunction& psi, const Potential& potential, double dt, std::size_t nsteps);

struct HermiteCoeffs {
  Grid1D grid;
  std::vector<cplx> coefficients;  // c_n, n = 0..nmax
  double reference_time = 0.0;
  double tail_mass = 0.0;  // |‖ψ‖² − Σ|c_n|²| at projection time

  std::size_t nmax() const { return coefficients.size() - 1; }
};

// L²-normalized Hermite functions h_0..h_nmax on the grid, from the
// three-term recurrence h_{n+1} = x√(2/(n+1)) h_n − √(n/(n+1)) h_{n−1}.
std::vector<RealField> hermite_functions(const Grid1D& grid, std::size_t nmax);

// Throws std::invalid_argument if the grid cannot resolve h_nmax.
HermiteCoeffs hermite_project(const WaveFunction& psi, std::size_t nmax);

// Exact harmonic evolution c_n(t) = c_n(t₀) e^{−i(n+½)(t−t₀)}, resynthesized on the grid.
WaveFunction hermite_evolve(const HermiteCoeffs& coeffs, double t);

// Harmonic-oscillator eigenvalue (n + ½).
constexpr double oscillator_energy(std::size_t n) { return static_cast<double>(n) + 0.5; }

}  // namespace qhd
