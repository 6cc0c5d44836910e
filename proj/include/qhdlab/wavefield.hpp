#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qhd {

using cplx = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<cplx>;

/// Uniform symmetric grid on [-L, L) with the origin on node N/2.
class Grid1D {
 public:
  /// The default scenario grid, L = 10, N = 1024.
  Grid1D() : Grid1D(10.0, 1024) {}
  Grid1D(double half_length, std::size_t point_count);

  double half_length() const { return half_length_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  // Offset from the centre node so x(N/2) == 0 exactly for any N.
  double x(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * dx_;
  }
  std::size_t origin_index() const { return n_ / 2; }

  std::vector<double> nodes() const;

  /// Angular wavenumber of FFT bin m in standard (unshifted) order.
  double wavenumber(std::size_t m) const;
  std::vector<double> wavenumbers() const;

  bool operator==(const Grid1D& other) const = default;

 private:
  double half_length_;
  std::size_t n_;
  double dx_;
};

/// Validated construction: L > 0, N even, N >= 8.
Grid1D make_grid(double half_length, std::size_t point_count);

/// Complex field sampled on a grid at time t.
class WaveFunction {
 public:
  WaveFunction(Grid1D grid, ComplexField values, double t = 0.0);

  /// Zero field.
  explicit WaveFunction(Grid1D grid, double t = 0.0);

  template <typename F>
  static WaveFunction sample(const Grid1D& grid, F&& f, double t = 0.0) {
    ComplexField v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = cplx(f(grid.x(j)));
    return WaveFunction(grid, std::move(v), t);
  }

  const Grid1D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  const cplx& operator[](std::size_t j) const { return values_[j]; }
  cplx& operator[](std::size_t j) { return values_[j]; }

  bool all_finite() const;

 private:
  Grid1D grid_;
  ComplexField values_;
  double t_;
};

WaveFunction operator+(const WaveFunction& a, const WaveFunction& b);
WaveFunction operator-(const WaveFunction& a, const WaveFunction& b);
WaveFunction operator*(cplx s, const WaveFunction& a);

/// External potential: V(x) = x^2/2, or samples tabulated on a grid.
class Potential {
 public:
  enum class Kind { harmonic, tabulated };

  static Potential harmonic();
  static Potential tabulated(RealField samples);

  Kind kind() const { return kind_; }
  RealField values(const Grid1D& grid) const;

  /// dV/dx on the grid: exact for harmonic, fourth-order differences for tabulated.
  RealField gradient(const Grid1D& grid) const;

 private:
  Potential(Kind kind, RealField samples) : kind_(kind), samples_(std::move(samples)) {}
  Kind kind_;
  RealField samples_;
};

/// dψ/dx via FFT, multiplication by i·k, inverse FFT. The unpaired
/// Nyquist bin is dropped so real input stays real.
ComplexField spectral_derivative(const WaveFunction& psi);
ComplexField spectral_derivative(const Grid1D& grid, std::span<const cplx> values);
RealField spectral_derivative(const Grid1D& grid, std::span<const double> values);

/// d²f/dx² via multiplication by -k² (Nyquist bin kept).
RealField spectral_second_derivative(const Grid1D& grid, std::span<const double> values);

/// Σ conj(f_j) g_j dx.
cplx inner_product(const WaveFunction& f, const WaveFunction& g);
double norm_squared(const WaveFunction& f);

/// Σ |f̂_m|² dx / N, the wavenumber-side mass (Parseval partner of norm_squared).
double spectral_norm_squared(const WaveFunction& f);

/// L² distance sqrt(Σ |f - g|² dx).
double l2_distance(const WaveFunction& f, const WaveFunction& g);

/// CSV `x,re_psi,im_psi` with 17 significant digits.
void write_field_csv(std::ostream& os, const WaveFunction& psi);
void write_field_csv(const std::string& path, const WaveFunction& psi);

/// Reads a field dump; the grid is reconstructed from the x column.
WaveFunction read_field_csv(std::istream& is);
WaveFunction read_field_csv(const std::string& path);

/// %.17g formatting used by every text output.
std::string format_double(double v);

}  // namespace qhd
