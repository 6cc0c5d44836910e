// numpy-facing bindings: fields cross the boundary as 1-D float64/complex128 arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhdlab/observables.hpp"
#include "qhdlab/propagator.hpp"
#include "qhdlab/scenario.hpp"

namespace py = pybind11;
using namespace qhd;

namespace {

using carray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using rarray = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <typename T>
py::array_t<T> to_numpy(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

template <typename T>
std::vector<T> from_numpy(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
  return std::vector<T>(a.data(), a.data() + a.size());
}

WaveFunction wave(const Grid1D& g, const carray& psi, double t = 0.0) { return WaveFunction(g, from_numpy<cplx>(psi), t); }

Potential potential_from(const Grid1D& g, const std::optional<rarray>& v) {
  if (!v) return Potential::harmonic();
  RealField samples = from_numpy<double>(*v);
  if (samples.size() != g.size()) throw std::invalid_argument("potential must have one sample per grid node");
  return Potential::tabulated(std::move(samples));
}

PhaseAssignment phases_from(const std::map<int, double>& m) {
  PhaseAssignment p;
  for (const auto& [id, c] : m) p.set(id, c);
  return p;
}

py::dict residual_dict(const ResidualReport& r) {
  py::dict d;
  d["max_abs"] = r.max_abs;
  d["tolerance"] = r.tolerance;
  d["passed"] = r.passed;
  d["values"] = r.values;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qhdlab, m) {
  m.doc() = "Split-step Schrodinger evolution, QHD observables and nodal-domain phase stitching";
  m.attr("__version__") = QHDLAB_VERSION;

  py::class_<Grid1D>(m, "Grid")
      .def(py::init(&make_grid), py::arg("L") = 10.0, py::arg("N") = 1024)
      .def_property_readonly("L", &Grid1D::half_length)
      .def_property_readonly("N", &Grid1D::size)
      .def_property_readonly("dx", &Grid1D::dx)
      .def("nodes", [](const Grid1D& g) { return to_numpy(g.nodes()); })
      .def("wavenumbers", [](const Grid1D& g) { return to_numpy(g.wavenumbers()); })
      .def("__eq__", &Grid1D::operator==)
      .def("__repr__", [](const Grid1D& g) {
        return "Grid(L=" + format_double(g.half_length()) + ", N=" + std::to_string(g.size()) + ")";
      });

  m.def("two_level_state", py::vectorize(&two_level_state), py::arg("x"), py::arg("t") = 0.0,
        "Two-level oscillator state psi0 - psi2 at time t.");
  m.def("first_excited_state", py::vectorize(&first_excited_state), py::arg("x"), py::arg("t") = 0.0);

  m.def(
      "split_step",
      [](const Grid1D& g, const carray& psi, double dt, std::size_t nsteps, const std::optional<rarray>& potential) {
        const WaveFunction out = split_step(wave(g, psi), potential_from(g, potential), dt, nsteps);
        return to_numpy(ComplexField(out.values().begin(), out.values().end()));
      },
      py::arg("grid"), py::arg("psi"), py::arg("dt"), py::arg("nsteps"), py::arg("potential") = py::none(),
      "Strang split-step evolution; potential defaults to x^2/2.");

  m.def(
      "hermite_evolve",
      [](const Grid1D& g, const carray& psi, double t, std::size_t nmax) {
        const WaveFunction out = hermite_evolve(hermite_project(wave(g, psi), nmax), t);
        return to_numpy(ComplexField(out.values().begin(), out.values().end()));
      },
      py::arg("grid"), py::arg("psi"), py::arg("t"), py::arg("nmax") = 128);

  m.def("density", [](const Grid1D& g, const carray& psi) { return to_numpy(density(wave(g, psi))); },
        py::arg("grid"), py::arg("psi"));
  m.def("current", [](const Grid1D& g, const carray& psi) { return to_numpy(current(wave(g, psi))); },
        py::arg("grid"), py::arg("psi"));
  m.def(
      "bohm_potential",
      [](const Grid1D& g, const rarray& rho) {
        const BohmPotential q = bohm_potential(g, from_numpy<double>(rho));
        py::array_t<bool> vac(static_cast<py::ssize_t>(q.vacuum.size()));
        for (std::size_t j = 0; j < q.vacuum.size(); ++j) vac.mutable_data()[j] = q.vacuum[j];
        return py::make_tuple(to_numpy(q.q), vac);
      },
      py::arg("grid"), py::arg("rho"), "Returns (Q, vacuum mask).");
  m.def(
      "energy_and_mass",
      [](const Grid1D& g, const carray& psi, const std::optional<rarray>& potential) {
        const EnergyReport e = energy_and_mass(wave(g, psi), potential_from(g, potential));
        py::dict d;
        d["kinetic"] = e.kinetic;
        d["potential"] = e.potential;
        d["total"] = e.total;
        d["mass"] = e.mass;
        return d;
      },
      py::arg("grid"), py::arg("psi"), py::arg("potential") = py::none());

  m.def(
      "slice_components",
      [](const Grid1D& g, const rarray& rho, double eps_rel) {
        const NodalDecomposition dec = slice_components(g, from_numpy<double>(rho), eps_rel);
        return py::make_tuple(dec.component_count, to_numpy(dec.labels));
      },
      py::arg("grid"), py::arg("rho"), py::arg("eps_rel") = 1e-10, "Returns (K, labels); label 0 is vacuum.");

  m.def(
      "stitch",
      [](const Grid1D& g, const carray& psi, const std::map<int, double>& phases, double eps_rel) {
        const WaveFunction w = wave(g, psi);
        const WaveFunction out = stitch(w, slice_components(g, density(w), eps_rel), phases_from(phases));
        return to_numpy(ComplexField(out.values().begin(), out.values().end()));
      },
      py::arg("grid"), py::arg("psi"), py::arg("phases"), py::arg("eps_rel") = 1e-10,
      "Multiply each nodal component of psi by exp(i C_k); phases maps component id to C_k.");

  m.def(
      "recover_phases",
      [](const Grid1D& g, const carray& psi, const carray& phi, double eps_rel) {
        const WaveFunction a = wave(g, psi), b = wave(g, phi);
        RecoveryOptions opt;
        opt.require_density_match = false;
        const PhaseRecovery rec = recover_phases(a, b, slice_components(g, density(a), eps_rel), opt);
        py::dict d;
        std::map<int, double> mean, disp;
        for (const auto& c : rec.components) {
          mean[c.id] = c.mean_phase;
          disp[c.id] = c.dispersion;
        }
        d["ok"] = rec.ok();
        d["phases"] = mean;
        d["dispersion"] = disp;
        d["density_mismatch"] = rec.density_mismatch;
        return d;
      },
      py::arg("grid"), py::arg("psi"), py::arg("phi"), py::arg("eps_rel") = 1e-10);

  m.def(
      "run_report",
      [](const std::string& config_text) {
        NonuniquenessReport r;
        {
          py::gil_scoped_release release;
          r = nonuniqueness_report(parse_config(config_text));
        }
        py::dict d;
        d["scenario"] = std::string(to_string(r.scenario));
        d["verdict"] = std::string(to_string(r.verdict));
        d["expected"] = std::string(to_string(expected_verdict(r.scenario)));
        d["dt_used"] = r.dt_used;
        d["times"] = to_numpy(r.distances.times);
        d["d_rho"] = to_numpy(r.distances.d_rho);
        d["d_current"] = to_numpy(r.distances.d_current);
        d["N_0"] = r.initial_slice.component_count;
        d["N_T"] = r.final_slice.component_count;
        d["spacetime_K"] = r.spacetime.component_count;
        d["psi_stationarity"] = r.psi_stationarity;
        d["psi_continuity"] = residual_dict(r.psi_continuity);
        d["psi_momentum"] = residual_dict(r.psi_momentum);
        d["phi_continuity"] = residual_dict(r.phi_continuity);
        d["phi_momentum"] = residual_dict(r.phi_momentum);
        d["report"] = render_report(r);
        return d;
      },
      py::arg("config_text") = "", "Run a scenario from config text (section.key = value lines).");

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
