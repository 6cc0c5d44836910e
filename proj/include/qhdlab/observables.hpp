#pragma once

#include <iosfwd>
#include <vector>

#include "qhdlab/wavefield.hpp"

namespace qhd {

/// Position density ρ and current density J at one instant.
struct DensityPair {
  RealField rho;
  RealField current;
  double t = 0.0;
};

struct EnergyReport {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;  // kinetic + potential
  double mass = 0.0;
};

/// Bohm potential Q = −½ (√ρ)_xx / √ρ with its vacuum bookkeeping.
struct BohmPotential {
  RealField q;
  std::vector<bool> vacuum;      // ρ < eps_abs; q is set to 0 there
  std::vector<bool> unreliable;  // within 3 nodes of a vacuum node
  double eps_abs = 0.0;
};

RealField density(const WaveFunction& psi);
RealField current(const WaveFunction& psi);
DensityPair density_pair(const WaveFunction& psi);

/// Default vacuum floor 1e-12·max ρ.
double default_vacuum_floor(const RealField& rho);

BohmPotential bohm_potential(const Grid1D& grid, const RealField& rho, double eps_abs);
BohmPotential bohm_potential(const Grid1D& grid, const RealField& rho);

EnergyReport energy_and_mass(const WaveFunction& psi, const Potential& potential);

/// CSV `t,x,rho,J,Q,vacuum_flag`; appends one block of rows per call.
void write_observables_header(std::ostream& os);
void write_observables_rows(std::ostream& os, const Grid1D& grid, const DensityPair& pair, const BohmPotential& q);

}  // namespace qhd
