#include "qhdlab/wavefield.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qhdlab/fft.hpp"

namespace qhd {

Grid1D::Grid1D(double half_length, std::size_t point_count)
    : half_length_(half_length), n_(point_count), dx_(2.0 * half_length / static_cast<double>(point_count)) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) throw std::invalid_argument("L must be positive");
  if (point_count % 2 != 0) throw std::invalid_argument("N must be even");
  if (point_count < 8) throw std::invalid_argument("N must be at least 8");
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
  return out;
}

double Grid1D::wavenumber(std::size_t m) const {
  const auto signed_m = m < n_ / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n_);
  return std::numbers::pi * signed_m / half_length_;
}

std::vector<double> Grid1D::wavenumbers() const {
  std::vector<double> k(n_);
  for (std::size_t m = 0; m < n_; ++m) k[m] = wavenumber(m);
  return k;
}

Grid1D make_grid(double half_length, std::size_t point_count) { return Grid1D(half_length, point_count); }

WaveFunction::WaveFunction(Grid1D grid, ComplexField values, double t)
    : grid_(grid), values_(std::move(values)), t_(t) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("field length does not match grid");
  if (!all_finite()) throw std::invalid_argument("field contains non-finite values");
  if (!std::isfinite(t_)) throw std::invalid_argument("time must be finite");
}

WaveFunction::WaveFunction(Grid1D grid, double t) : grid_(grid), values_(grid.size()), t_(t) {}

bool WaveFunction::all_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

namespace {

void require_same_grid(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("grid mismatch");
}

}  // namespace

WaveFunction operator+(const WaveFunction& a, const WaveFunction& b) {
  require_same_grid(a, b);
  ComplexField v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + b[j];
  return WaveFunction(a.grid(), std::move(v), a.time());
}

WaveFunction operator-(const WaveFunction& a, const WaveFunction& b) {
  require_same_grid(a, b);
  ComplexField v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] - b[j];
  return WaveFunction(a.grid(), std::move(v), a.time());
}

WaveFunction operator*(cplx s, const WaveFunction& a) {
  ComplexField v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = s * a[j];
  return WaveFunction(a.grid(), std::move(v), a.time());
}

Potential Potential::harmonic() { return Potential(Kind::harmonic, {}); }

Potential Potential::tabulated(RealField samples) {
  if (samples.empty()) throw std::invalid_argument("tabulated potential needs samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw std::invalid_argument("tabulated potential must be finite");
  return Potential(Kind::tabulated, std::move(samples));
}

RealField Potential::values(const Grid1D& grid) const {
  if (kind_ == Kind::tabulated) {
    if (samples_.size() != grid.size()) throw std::invalid_argument("tabulated potential does not match grid");
    return samples_;
  }
  RealField v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = grid.x(j);
    v[j] = 0.5 * x * x;
  }
  return v;
}

RealField Potential::gradient(const Grid1D& grid) const {
  const std::size_t n = grid.size();
  RealField g(n);
  if (kind_ == Kind::harmonic) {
    for (std::size_t j = 0; j < n; ++j) g[j] = grid.x(j);
    return g;
  }
  // Tabulated potentials are not periodic in general: fourth-order central
  // differences in the interior, second-order one-sided at the two ends.
  const RealField v = values(grid);
  const double h = grid.dx();
  for (std::size_t j = 2; j + 2 < n; ++j)
    g[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) / (12.0 * h);
  g[1] = (v[2] - v[0]) / (2.0 * h);
  g[n - 2] = (v[n - 1] - v[n - 3]) / (2.0 * h);
  g[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  g[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return g;
}

ComplexField spectral_derivative(const Grid1D& grid, std::span<const cplx> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("field length does not match grid");
  const std::size_t n = grid.size();
  ComplexField work(values.begin(), values.end());
  fft::forward(work);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (m == n / 2) {
      work[m] = 0.0;
      continue;
    }
    work[m] *= cplx(0.0, grid.wavenumber(m) * inv_n);
  }
  fft::inverse(work);
  return work;
}

ComplexField spectral_derivative(const WaveFunction& psi) { return spectral_derivative(psi.grid(), psi.values()); }

RealField spectral_derivative(const Grid1D& grid, std::span<const double> values) {
  ComplexField c(values.begin(), values.end());
  const ComplexField d = spectral_derivative(grid, c);
  RealField out(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) out[j] = d[j].real();
  return out;
}

RealField spectral_second_derivative(const Grid1D& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("field length does not match grid");
  const std::size_t n = grid.size();
  ComplexField work(values.begin(), values.end());
  fft::forward(work);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double k = grid.wavenumber(m);
    work[m] *= -k * k * inv_n;
  }
  fft::inverse(work);
  RealField out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = work[j].real();
  return out;
}

cplx inner_product(const WaveFunction& f, const WaveFunction& g) {
  require_same_grid(f, g);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += std::conj(f[j]) * g[j];
  return acc * f.grid().dx();
}

double norm_squared(const WaveFunction& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::norm(v);
  return acc * f.grid().dx();
}

double spectral_norm_squared(const WaveFunction& f) {
  ComplexField work(f.values().begin(), f.values().end());
  fft::forward(work);
  double acc = 0.0;
  for (const auto& v : work) acc += std::norm(v);
  return acc * f.grid().dx() / static_cast<double>(f.size());
}

double l2_distance(const WaveFunction& f, const WaveFunction& g) {
  require_same_grid(f, g);
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += std::norm(f[j] - g[j]);
  return std::sqrt(acc * f.grid().dx());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& os, const WaveFunction& psi) {
  os << "x,re_psi,im_psi\n";
  for (std::size_t j = 0; j < psi.size(); ++j)
    os << format_double(psi.grid().x(j)) << ',' << format_double(psi[j].real()) << ','
       << format_double(psi[j].imag()) << '\n';
}

void write_field_csv(const std::string& path, const WaveFunction& psi) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field_csv(os, psi);
  if (!os) throw std::runtime_error("failed writing " + path);
}

WaveFunction read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty field file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,re_psi,im_psi") throw std::invalid_argument("field file header must be x,re_psi,im_psi");
  std::vector<double> xs;
  ComplexField vals;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    double x = 0, re = 0, im = 0;
    char c1 = 0, c2 = 0;
    if (!(row >> x >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
      throw std::invalid_argument("malformed field row at line " + std::to_string(lineno));
    xs.push_back(x);
    vals.emplace_back(re, im);
  }
  if (xs.size() < 8) throw std::invalid_argument("field file needs at least 8 rows");
  const double half_length = -xs.front();
  Grid1D grid = make_grid(half_length, xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (std::abs(xs[j] - grid.x(j)) > 1e-9 * half_length)
      throw std::invalid_argument("field file x column is not a symmetric uniform grid");
  return WaveFunction(grid, std::move(vals));
}

WaveFunction read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_field_csv(is);
}

}  // namespace qhd
