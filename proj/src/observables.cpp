#include "qhdlab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <limits>
#include <stdexcept>

#include "qhdlab/fft.hpp"


namespace qhd {

RealField density(const WaveFunction& psi) {
  RealField rho(psi.size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(psi[j]);
  return rho;
}

// J = Re ψ · ∂_x Im ψ − Im ψ · ∂_x Re ψ, so real fields give J = 0 exactly.
RealField current(const WaveFunction& psi) {
  const std::size_t n = psi.size();
  RealField re(n), im(n);
  for (std::size_t j = 0; j < n; ++j) {
    re[j] = psi[j].real();
    im[j] = psi[j].imag();
  }
  const RealField re_x = spectral_derivative(psi.grid(), re);
  const RealField im_x = spectral_derivative(psi.grid(), im);
  RealField j_out(n);
  for (std::size_t j = 0; j < n; ++j) j_out[j] = re[j] * im_x[j] - im[j] * re_x[j];
  return j_out;
}

DensityPair density_pair(const WaveFunction& psi) { return {density(psi), current(psi), psi.time()}; }

double default_vacuum_floor(const RealField& rho) {
  const double peak = rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());
  return 1e-12 * peak;
}

namespace {

// Second spectral derivative with bins at the round-off floor
// (|f̂| < ε·max|f̂|) dropped. Otherwise k² amplifies FFT noise ~10⁵-fold,
// and dividing by a small √ρ in the tails exposes it.
RealField denoised_second_derivative(const Grid1D& grid, const RealField& f) {
  const std::size_t n = f.size();
  ComplexField work(f.begin(), f.end());
  fft::forward(work);
  double peak = 0.0;
  for (const auto& c : work) peak = std::max(peak, std::abs(c));
  const double floor = std::numeric_limits<double>::epsilon() * peak;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double k = grid.wavenumber(m);
    work[m] = std::abs(work[m]) < floor ? cplx(0.0) : work[m] * (-k * k * inv_n);
  }
  fft::inverse(work);
  RealField out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = work[j].real();
  return out;
}

}  // namespace

BohmPotential bohm_potential(const Grid1D& grid, const RealField& rho, double eps_abs) {
  if (rho.size() != grid.size()) throw std::invalid_argument("density length does not match grid");
  if (!(eps_abs > 0.0)) throw std::invalid_argument("eps_abs must be positive");
  const std::size_t n = rho.size();
  RealField amp(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (rho[j] < 0.0) throw std::invalid_argument("density must be nonnegative");
    amp[j] = std::sqrt(rho[j]);
  }
  const RealField amp_xx = denoised_second_derivative(grid, amp);

  BohmPotential out{RealField(n, 0.0), std::vector<bool>(n, false), std::vector<bool>(n, false), eps_abs};
  for (std::size_t j = 0; j < n; ++j) {
    if (rho[j] < eps_abs) {
      out.vacuum[j] = true;
      continue;
    }
    out.q[j] = -0.5 * amp_xx[j] / amp[j];
  }
  constexpr std::size_t halo = 3;
  for (std::size_t j = 0; j < n; ++j) {
    if (!out.vacuum[j]) continue;
    const std::size_t lo = j >= halo ? j - halo : 0;
    const std::size_t hi = std::min(n - 1, j + halo);
    for (std::size_t i = lo; i <= hi; ++i) out.unreliable[i] = true;
  }
  return out;
}

BohmPotential bohm_potential(const Grid1D& grid, const RealField& rho) {
  const double floor = default_vacuum_floor(rho);
  return bohm_potential(grid, rho, floor > 0.0 ? floor : 1e-300);
}

EnergyReport energy_and_mass(const WaveFunction& psi, const Potential& potential) {
  const Grid1D& grid = psi.grid();
  const ComplexField d = spectral_derivative(psi);
  const RealField v = potential.values(grid);
  double grad_sq = 0.0;
  double pot = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double r = std::norm(psi[j]);
    grad_sq += std::norm(d[j]);
    pot += v[j] * r;
    mass += r;
  }
  EnergyReport e;
  e.kinetic = 0.5 * grad_sq * grid.dx();
  e.potential = pot * grid.dx();
  e.total = e.kinetic + e.potential;
  e.mass = mass * grid.dx();
  return e;
}

void write_observables_header(std::ostream& os) { os << "t,x,rho,J,Q,vacuum_flag\n"; }

void write_observables_rows(std::ostream& os, const Grid1D& grid, const DensityPair& pair, const BohmPotential& q) {
  const std::string t = format_double(pair.t);
  for (std::size_t j = 0; j < grid.size(); ++j)
    os << t << ',' << format_double(grid.x(j)) << ',' << format_double(pair.rho[j]) << ','
       << format_double(pair.current[j]) << ',' << format_double(q.q[j]) << ',' << (q.vacuum[j] ? 1 : 0) << '\n';
}

}  // namespace qhd
