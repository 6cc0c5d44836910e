#include <doctest.h>

#include <random>
#include <sstream>

#include "qhdlab/wavefield.hpp"
#include "test_support.hpp"

using namespace qhd;
using qhd::testing::default_grid;
using qhd::testing::sampled;

TEST_CASE("make_grid places the origin on node N/2") {
  const Grid1D g = make_grid(10.0, 1024);
  CHECK(g.dx() == 0.01953125);
  CHECK(g.x(512) == 0.0);
  CHECK(g.dx() * static_cast<double>(g.size()) == 20.0);
  CHECK(g.x(0) == -10.0);

  const Grid1D small = make_grid(8.0, 8);
  const std::vector<double> expected{-8, -6, -4, -2, 0, 2, 4, 6};
  CHECK(small.nodes() == expected);
}

TEST_CASE("make_grid rejects bad sizes") {
  CHECK_THROWS_WITH(make_grid(10.0, 7), "N must be even");
  CHECK_THROWS_WITH(make_grid(0.0, 64), "L must be positive");
  CHECK_THROWS_WITH(make_grid(-1.0, 64), "L must be positive");
  CHECK_THROWS(make_grid(10.0, 6));
}

TEST_CASE("wavenumbers follow FFT ordering k_m = pi m / L") {
  const Grid1D g = make_grid(8.0, 8);
  const double dk = std::numbers::pi / 8.0;
  CHECK(g.wavenumber(0) == 0.0);
  CHECK(g.wavenumber(1) == doctest::Approx(dk));
  CHECK(g.wavenumber(3) == doctest::Approx(3 * dk));
  CHECK(g.wavenumber(4) == doctest::Approx(-4 * dk));
  CHECK(g.wavenumber(7) == doctest::Approx(-dk));
}

TEST_CASE("WaveFunction validates length and finiteness") {
  const Grid1D g = make_grid(4.0, 8);
  CHECK_THROWS(WaveFunction(g, ComplexField(7)));
  ComplexField bad(8);
  bad[3] = cplx(std::nan(""), 0.0);
  CHECK_THROWS(WaveFunction(g, bad));
}

TEST_CASE("spectral derivative of a single Fourier mode is exact") {
  const Grid1D g = default_grid();
  const double k = std::numbers::pi / g.half_length();
  const auto psi = sampled(g, [&](double x) { return std::polar(1.0, k * x); });
  const ComplexField d = spectral_derivative(psi);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    worst = std::max(worst, std::abs(d[j] - cplx(0.0, k) * psi[j]));
  CHECK(worst < 1e-12);
}

TEST_CASE("spectral derivative of a constant vanishes") {
  const Grid1D g = default_grid();
  const auto psi = sampled(g, [](double) { return cplx(2.5, -1.0); });
  for (const auto& v : spectral_derivative(psi)) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("spectral derivative of a Gaussian matches -x e^{-x^2/2}") {
  const Grid1D g = default_grid();
  const auto psi = sampled(g, [](double x) { return std::exp(-0.5 * x * x); });
  const ComplexField d = spectral_derivative(psi);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    worst = std::max(worst, std::abs(d[j] - cplx(-x * std::exp(-0.5 * x * x))));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("spectral derivative keeps real input real") {
  const Grid1D g = make_grid(5.0, 64);
  const auto psi = sampled(g, [](double x) { return std::tanh(x) * std::exp(-x * x); });
  for (const auto& v : spectral_derivative(psi)) CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("inner products against Gaussian and Hermite oracles") {
  const Grid1D g = default_grid();
  const auto gauss = sampled(g, [](double x) { return std::exp(-0.5 * x * x); });
  // ∫ e^{-x²} dx = √π
  CHECK(std::abs(inner_product(gauss, gauss) - cplx(qhd::testing::sqrt_pi)) < 1e-12);

  const double c0 = std::pow(std::numbers::pi, -0.25);
  const auto h0 = sampled(g, [&](double x) { return c0 * std::exp(-0.5 * x * x); });
  const auto h1 = sampled(g, [&](double x) { return c0 * std::sqrt(2.0) * x * std::exp(-0.5 * x * x); });
  CHECK(std::abs(inner_product(h0, h1)) < 1e-12);
  CHECK(std::abs(inner_product(h1, h1) - 1.0) < 1e-12);

  const WaveFunction zero(g);
  CHECK(inner_product(zero, gauss) == cplx(0.0));
  CHECK_THROWS(inner_product(gauss, WaveFunction(make_grid(10.0, 512))));
}

namespace {

// Random smooth localized field: a few Gaussian packets with random
// centres, widths, momenta and complex weights.
WaveFunction random_packet(const Grid1D& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> centre(-3.0, 3.0), width(0.5, 1.5), mom(-4.0, 4.0), amp(-1.0, 1.0);
  struct P {
    double c, w, k;
    cplx a;
  };
  std::vector<P> ps;
  for (int i = 0; i < 3; ++i) ps.push_back({centre(rng), width(rng), mom(rng), cplx(amp(rng), amp(rng))});
  return WaveFunction::sample(g, [&](double x) {
    cplx v = 0.0;
    for (const auto& p : ps) v += p.a * std::exp(-0.5 * (x - p.c) * (x - p.c) / (p.w * p.w)) * std::polar(1.0, p.k * x);
    return v;
  });
}

}  // namespace

TEST_CASE("property: derivative linearity, positivity and Parseval") {
  const Grid1D g = default_grid();
  std::mt19937 rng(20240611u);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const WaveFunction f = random_packet(g, rng);
    const WaveFunction h = random_packet(g, rng);
    const cplx a(coef(rng), coef(rng)), b(coef(rng), coef(rng));

    const ComplexField lhs = spectral_derivative(a * f + b * h);
    const ComplexField df = spectral_derivative(f), dh = spectral_derivative(h);
    double worst = 0.0, fmax = 0.0, hmax = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      worst = std::max(worst, std::abs(lhs[j] - (a * df[j] + b * dh[j])));
      fmax = std::max(fmax, std::abs(f[j]));
      hmax = std::max(hmax, std::abs(h[j]));
    }
    // Round-off scale of a spectral derivative: ε·k_max·max|input|.
    const double kmax = std::numbers::pi / g.dx();
    const double unit = std::numeric_limits<double>::epsilon() * kmax * (std::abs(a) * fmax + std::abs(b) * hmax);
    CHECK(worst <= 4.0 * unit);

    const cplx ff = inner_product(f, f);
    CHECK(ff.real() >= 0.0);
    CHECK(std::abs(ff.imag()) <= 1e-14 * ff.real());
    CHECK(std::abs(spectral_norm_squared(f) - ff.real()) <= 1e-12 * ff.real());
  }
}

TEST_CASE("field CSV round trip is exact at 17 significant digits") {
  const Grid1D g = make_grid(6.0, 64);
  std::mt19937 rng(7u);
  const WaveFunction f = random_packet(g, rng);
  std::stringstream ss;
  write_field_csv(ss, f);
  CHECK(ss.str().rfind("x,re_psi,im_psi\n", 0) == 0);
  const WaveFunction back = read_field_csv(ss);
  CHECK(back.grid() == g);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(back[j] == f[j]);
}

TEST_CASE("field CSV reader rejects malformed input") {
  std::istringstream bad_header("x,re,im\n0,0,0\n");
  CHECK_THROWS(read_field_csv(bad_header));
  std::istringstream bad_row("x,re_psi,im_psi\n0;1;2\n");
  CHECK_THROWS(read_field_csv(bad_row));
}

TEST_CASE("harmonic potential evaluates x^2/2 and its gradient") {
  const Grid1D g = make_grid(4.0, 16);
  const Potential v = Potential::harmonic();
  const RealField vals = v.values(g), grad = v.gradient(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(vals[j] == 0.5 * g.x(j) * g.x(j));
    CHECK(grad[j] == g.x(j));
  }
  // Tabulated copy of a quadratic: fourth-order differences are exact inside.
  const Potential tab = Potential::tabulated(vals);
  const RealField tgrad = tab.gradient(g);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(tgrad[j] == doctest::Approx(g.x(j)).epsilon(1e-12));
  CHECK_THROWS(Potential::tabulated({1.0, std::numeric_limits<double>::infinity()}));
  CHECK_THROWS(tab.values(make_grid(4.0, 32)));
}
