#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qhdlab/observables.hpp"
#include "qhdlab/wavefield.hpp"

namespace qhd {

/// Sampled QHD solution curve {(ρ(t), J(t))} generated by a Schrödinger run.
struct Trajectory {
  Grid1D grid;
  double dt = 0.0;          // propagation step actually used
  std::size_t stride = 1;   // steps between samples
  std::vector<double> times;
  std::vector<DensityPair> samples;
  std::vector<EnergyReport> energies;
  std::vector<WaveFunction> states;  // may be empty for hand-built trajectories
  std::string provenance;

  std::size_t size() const { return samples.size(); }
  double sample_spacing() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  std::vector<RealField> density_stack() const;
};

struct StepSchedule {
  double dt = 0.0;
  std::size_t nsteps = 0;
};

// Steps covering [0, T] as a multiple of stride. If T/dt is not an integral
// multiple of stride, the step count is rounded up to the next multiple and
// dt shrunk to T/nsteps.
StepSchedule schedule_steps(double T, double dt, std::size_t stride);

Trajectory run_trajectory(const WaveFunction& psi0, const Potential& potential, double T, double dt, std::size_t stride,
                          std::string provenance = {});

/// Tensor-product test function exp(−(x−x0)²/2s²)·b((t−t0)/w) with the
/// smooth bump b(τ) = exp(1 − 1/(1−τ²)) on |τ| < 1.
struct TestFunction {
  double x0 = 0.0, width_x = 1.0;
  double t0 = 0.0, half_width_t = 1.0;

  double value(double x, double t) const;
  double d_t(double x, double t) const;
  double d_x(double x, double t) const;
  double d_xxx(double x, double t) const;
};

struct TestFunctionBank {
  std::string id;
  std::vector<TestFunction> functions;
};

// Eight functions: x0 ∈ {−1.5, −0.5, 0.5, 1.5}, s = 0.75, time windows
// centred at T/3 and 2T/3 with half-width T/3 (compact in (0, T)).
TestFunctionBank default_test_bank(double T);

struct ResidualReport {
  enum class Equation { continuity, momentum };

  Equation equation = Equation::continuity;
  std::string bank_id;
  std::vector<double> values;
  double max_abs = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::size_t nx = 0, nsamples = 0;
  double sample_spacing = 0.0;
};

inline constexpr double continuity_tolerance = 1e-5;
inline constexpr double momentum_tolerance = 1e-3;

// R(ω) = ∫∫ (ρ ω_t + J ω_x) dx dt; trapezoid in t, rectangle in x.
ResidualReport continuity_residual(const Trajectory& traj, const TestFunctionBank& bank,
                                   double tolerance = continuity_tolerance);

// R(ω) = ∫∫ [J ω_t + (J²/ρ) ω_x − ρ V_x ω − ¼ ρ ω_xxx + (∂_x√ρ)² ω_x] dx dt.
// J²/ρ is set to 0 where ρ < 1e-12·max ρ. With stored states, (∂_x√ρ)² is
// |ψ_x|² − (J²/ρ)_reg; otherwise it is the spectral derivative of √ρ, squared.
ResidualReport momentum_residual(const Trajectory& traj, const Potential& potential, const TestFunctionBank& bank,
                                 double tolerance = momentum_tolerance);

struct DistanceCurve {
  std::vector<double> times;
  std::vector<double> d_rho;
  std::vector<double> d_current;

  double max_rho() const;
  double max_current() const;
};

DistanceCurve trajectory_distance(const Trajectory& a, const Trajectory& b);

/// CSV `t,x,rho,J`.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace qhd
