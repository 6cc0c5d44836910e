#include <doctest.h>

#include <map>
#include <sstream>

#include "qhdlab/nodal.hpp"
#include "qhdlab/observables.hpp"
#include "qhdlab/scenario.hpp"
#include "test_support.hpp"

using namespace qhd;
using qhd::testing::default_grid;
using qhd::testing::sampled;

namespace {

const double pi = std::numbers::pi;

RealField two_level_density(const Grid1D& g, double t) {
  return density(sampled(g, [t](double x) { return two_level_state(x, t); }, t));
}

struct Stack {
  std::vector<WaveFunction> psi;
  std::vector<RealField> rho;
  std::vector<double> times;
};

template <typename F>
Stack make_stack(const Grid1D& g, F&& f, double t_end, std::size_t slices) {
  Stack s;
  for (std::size_t m = 0; m < slices; ++m) {
    const double t = t_end * static_cast<double>(m) / static_cast<double>(slices - 1);
    s.psi.push_back(sampled(g, [&](double x) { return f(x, t); }, t));
    s.rho.push_back(density(s.psi.back()));
    s.times.push_back(t);
  }
  return s;
}

// Checks the labeling invariants: labeled iff above threshold, ids
// contiguous 1..K and numbered by first occurrence in scan order.
void check_label_invariants(const NodalDecomposition& dec, std::span<const RealField> stack) {
  int next = 1;
  for (std::size_t m = 0; m < dec.nt; ++m)
    for (std::size_t j = 0; j < dec.nx; ++j) {
      const int l = dec.label(j, m);
      CHECK((l > 0) == (stack[m][j] > dec.threshold));
      if (l == next) ++next;
      CHECK(l < next);
    }
  CHECK(next - 1 == dec.component_count);
  CHECK(dec.components.size() == static_cast<std::size_t>(dec.component_count));
}

}  // namespace

TEST_CASE("slice of the two-level seed at t = 0 splits at the origin") {
  const Grid1D g = default_grid();
  const RealField rho = two_level_density(g, 0.0);
  const NodalDecomposition dec = slice_components(g, rho, 1e-10);
  CHECK(dec.mode == NodalDecomposition::Mode::slice);
  CHECK(dec.component_count == 2);
  CHECK(dec.label(g.origin_index()) == 0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const int l = dec.label(j);
    if (l == 0) continue;
    CHECK(l == (g.x(j) < 0.0 ? 1 : 2));
  }
  CHECK(dec.components[0].x_hi == g.origin_index() - 1);
  CHECK(dec.components[1].x_lo == g.origin_index() + 1);
  check_label_invariants(dec, std::span<const RealField>(&rho, 1));
}

TEST_CASE("slice of the two-level state at t = pi/4 is connected") {
  const Grid1D g = default_grid();
  CHECK(slice_components(g, two_level_density(g, pi / 4), 1e-10).component_count == 1);
}

TEST_CASE("first excited state has two slice components at every time") {
  const Grid1D g = default_grid();
  for (double t : {0.0, 0.37, 1.0, 2.9}) {
    const auto psi = sampled(g, [t](double x) { return first_excited_state(x, t); });
    CHECK(slice_components(g, density(psi), 1e-10).component_count == 2);
  }
}

TEST_CASE("slice counts are stable across six decades of eps_rel") {
  const Grid1D g = default_grid();
  const RealField r0 = two_level_density(g, 0.0), r1 = two_level_density(g, pi / 4);
  for (double eps : {1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
    CHECK(slice_components(g, r0, eps).component_count == 2);
    CHECK(slice_components(g, r1, eps).component_count == 1);
  }
}

TEST_CASE("slice_components error paths") {
  const Grid1D g = make_grid(4.0, 16);
  const RealField rho(g.size(), 1.0);
  CHECK_THROWS_WITH(slice_components(g, RealField(g.size(), 0.0), 1e-10), "all-vacuum input");
  CHECK_THROWS_WITH(slice_components(g, rho, 0.0), "eps_rel must lie in (0, 1)");
  CHECK_THROWS_WITH(slice_components(g, rho, 1.0), "eps_rel must lie in (0, 1)");
  CHECK_THROWS(slice_components(g, RealField(8, 1.0), 1e-10));
  RealField neg = rho;
  neg[3] = -1.0;
  CHECK_THROWS(slice_components(g, neg, 1e-10));
}

TEST_CASE("space-time components of the two-level state over [0, pi]") {
  const Grid1D g = default_grid();
  const Stack s = make_stack(g, two_level_state, pi, 401);
  const NodalDecomposition dec = spacetime_components(g, s.rho, s.times, 1e-10);
  CHECK(dec.mode == NodalDecomposition::Mode::spacetime);
  CHECK(dec.nt == 401);
  CHECK(dec.component_count == 1);
  CHECK(dec.isolated_zero_count() >= 1);
  for (const auto& c : dec.vacuum_clusters) CHECK_FALSE(c.separating());
  CHECK(dec.label(g.origin_index(), 0) == 0);
  check_label_invariants(dec, s.rho);
  CHECK_THROWS_WITH(interface_flux(s.psi, dec), "no interface");
}

TEST_CASE("space-time components of the first excited state split along x = 0") {
  const Grid1D g = default_grid();
  const Stack s = make_stack(g, first_excited_state, 1.0, 101);
  const NodalDecomposition dec = spacetime_components(g, s.rho, s.times, 1e-10);
  CHECK(dec.component_count == 2);
  for (std::size_t m = 0; m < dec.nt; ++m) {
    CHECK(dec.label(g.origin_index(), m) == 0);
    CHECK(dec.label(g.origin_index() - 1, m) == 1);
    CHECK(dec.label(g.origin_index() + 1, m) == 2);
  }
  check_label_invariants(dec, s.rho);
}

TEST_CASE("duplicated slice stack reproduces the slice count") {
  const Grid1D g = default_grid();
  for (double t : {0.0, pi / 4}) {
    const RealField r = two_level_density(g, t);
    const std::vector<RealField> stack{r, r, r};
    const std::vector<double> times{0.0, 0.1, 0.2};
    CHECK(spacetime_components(g, stack, times, 1e-10).component_count ==
          slice_components(g, r, 1e-10).component_count);
  }
}

TEST_CASE("spacetime_components error paths") {
  const Grid1D g = make_grid(4.0, 16);
  const RealField r(g.size(), 1.0);
  const std::vector<RealField> one{r};
  const std::vector<double> t1{0.0};
  CHECK_THROWS(spacetime_components(g, one, t1, 1e-10));
  const std::vector<RealField> three{r, r, r};
  const std::vector<double> uneven{0.0, 0.1, 0.3};
  CHECK_THROWS_WITH(spacetime_components(g, three, uneven, 1e-10), "slice times must be uniformly spaced");
  const std::vector<RealField> empty{RealField(g.size(), 0.0), RealField(g.size(), 0.0)};
  const std::vector<double> t2{0.0, 0.1};
  CHECK_THROWS_WITH(spacetime_components(g, empty, t2, 1e-10), "all-vacuum input");
}

TEST_CASE("interface flux of the first excited state is one along x = 0") {
  const Grid1D g = default_grid();
  const Stack s = make_stack(g, first_excited_state, 1.0, 101);
  const NodalDecomposition dec = spacetime_components(g, s.rho, s.times, 1e-10);
  const InterfaceAnalysis ia = interface_flux(s.psi, dec);
  CHECK(ia.samples.size() == dec.nt);
  CHECK(ia.degenerate_normals == 0);
  CHECK_FALSE(ia.space_like);
  for (const auto& smp : ia.samples) {
    CHECK(smp.j == g.origin_index());
    CHECK(smp.label_a == 1);
    CHECK(smp.label_b == 2);
    CHECK(std::abs(smp.upsilon_x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(smp.upsilon_x) <= 1.0);
    CHECK(std::abs(std::abs(smp.flux) - 1.0) < 1e-6);
    CHECK(s.rho[smp.m][smp.j] <= dec.threshold);
  }
  CHECK(std::abs(ia.min_abs_flux - 1.0) < 1e-6);
  CHECK(std::abs(ia.max_abs_flux - 1.0) < 1e-6);
}

TEST_CASE("interface flux vanishes across a double zero") {
  const Grid1D g = default_grid();
  const Stack s = make_stack(g, [](double x, double) { return x * x * std::exp(-0.5 * x * x); }, 1.0, 21);
  const NodalDecomposition dec = spacetime_components(g, s.rho, s.times, 1e-10);
  REQUIRE(dec.component_count == 2);
  const InterfaceAnalysis ia = interface_flux(s.psi, dec);
  REQUIRE_FALSE(ia.samples.empty());
  CHECK(ia.max_abs_flux < 1e-8);
}

TEST_CASE("interface_flux rejects slice decompositions and mismatched stacks") {
  const Grid1D g = default_grid();
  const Stack s = make_stack(g, first_excited_state, 1.0, 5);
  const auto slice = slice_components(g, s.rho[0], 1e-10);
  CHECK_THROWS(interface_flux(s.psi, slice));
  const auto dec = spacetime_components(g, s.rho, s.times, 1e-10);
  CHECK_THROWS(interface_flux(std::span<const WaveFunction>(s.psi).first(3), dec));
}

TEST_CASE("property: positive fields are connected and labels are scale invariant") {
  const Grid1D g = default_grid();
  RealField pos(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) pos[j] = 1.0 + 0.5 * std::sin(3.0 * g.x(j));
  CHECK(slice_components(g, pos, 1e-10).component_count == 1);

  const RealField r = two_level_density(g, 0.0);
  const auto base = slice_components(g, r, 1e-8);
  for (double c : {1e-30, 3.7, 1e20}) {
    RealField scaled(r);
    for (auto& v : scaled) v *= c;
    CHECK(slice_components(g, scaled, 1e-8).labels == base.labels);
  }
}

TEST_CASE("property: raising eps_rel only shrinks or splits components") {
  const Grid1D g = default_grid();
  // Density with two exact zeros and several shallow dips.
  RealField rho(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j), s = std::sin(2.5 * x);
    rho[j] = std::exp(-x * x / 4.0) * (s * s * (x - 1.0) * (x - 1.0) + 1e-9 * (1.0 + std::cos(7.0 * x)));
  }
  const std::vector<double> eps{1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2};
  for (std::size_t a = 0; a < eps.size(); ++a)
    for (std::size_t b = a + 1; b < eps.size(); ++b) {
      const auto lo = slice_components(g, rho, eps[a]), hi = slice_components(g, rho, eps[b]);
      std::map<int, int> parent;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (hi.label(j) == 0) continue;
        REQUIRE(lo.label(j) != 0);
        auto [it, inserted] = parent.emplace(hi.label(j), lo.label(j));
        CHECK(it->second == lo.label(j));
      }
    }
}

TEST_CASE("property: time-independent density gives spacetime K equal to slice K") {
  const Grid1D g = default_grid();
  const Stack s = make_stack(g, [](double x, double t) { return std::polar(x * (x - 2.0) * std::exp(-0.5 * x * x), t); },
                             1.0, 11);
  CHECK(spacetime_components(g, s.rho, s.times, 1e-10).component_count ==
        slice_components(g, s.rho[0], 1e-10).component_count);
}

TEST_CASE("topology report and label CSV formats") {
  const Grid1D g = make_grid(4.0, 8);
  const RealField rho{1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0};
  const auto dec = slice_components(g, rho, 1e-10);
  CHECK(dec.component_count == 3);
  CHECK(topology_report(dec) ==
        "mode: slice\n"
        "eps_rel: 1e-10\n"
        "threshold: 1e-10\n"
        "grid: nx=8 nt=1\n"
        "K: 3\n"
        "components:\n"
        "  [1, x=[-4, -3], t=[0, 0], 2]\n"
        "  [2, x=[-1, -1], t=[0, 0], 1]\n"
        "  [3, x=[2, 3], t=[0, 0], 2]\n"
        "separating_vacuum_clusters: 2\n"
        "isolated_zeros: 0\n");

  std::ostringstream os;
  write_label_csv(os, dec);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,label");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0] == "0,-4,1");
  CHECK(rows[2] == "0,-2,0");
  CHECK(rows[3] == "0,-1,2");
  CHECK(rows[7] == "0,3,3");
}
