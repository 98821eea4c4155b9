#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rdmgen/closedform.hpp"
#include "rdmgen/coefficients.hpp"
#include "rdmgen/config.hpp"
#include "rdmgen/genfunc.hpp"
#include "rdmgen/oracle.hpp"
#include "rdmgen/specfun.hpp"

namespace py = pybind11;
using namespace rdm;

namespace {

std::vector<BathMode> to_modes(const std::vector<std::pair<double, cplx>>& modes) {
  std::vector<BathMode> out;
  for (const auto& [omega, f] : modes) out.push_back({omega, f});
  return out;
}

std::vector<ReducedDensityMatrix> oracle_reduced(const SystemSpec& spec, cplx gamma, const std::vector<double>& times,
                                                 int n_sys, std::vector<int> n_bath, double tail) {
  oracle::CutoffPlan plan;
  plan.n_sys = n_sys;
  plan.n_bath = std::move(n_bath);
  plan.thermal_tail_tolerance = tail;
  const auto rho0 = oracle::initial_state(spec, plan, gamma);
  return oracle::evolve_reduced(spec, plan, rho0, times);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reduced density matrices of a driven, damped quadratic oscillator.";

  py::register_exception<Error>(m, "RdmError", PyExc_RuntimeError);

  py::class_<SystemSpec>(m, "SystemSpec")
      .def(py::init<>())
      .def_readwrite("omega0", &SystemSpec::omega0)
      .def_readwrite("phi", &SystemSpec::phi)
      .def_readwrite("beta", &SystemSpec::beta)
      .def("set_sinusoidal_drive", [](SystemSpec& s, double k0, double nu) { s.drive = SinusoidalDrive{k0, nu}; },
           py::arg("k0"), py::arg("nu"))
      .def("set_tabulated_drive",
           [](SystemSpec& s, std::vector<double> t, std::vector<cplx> k) { s.drive = TabulatedDrive{t, k}; },
           py::arg("t"), py::arg("k"))
      .def("set_discrete_bath",
           [](SystemSpec& s, const std::vector<std::pair<double, cplx>>& modes) { s.bath = DiscreteBath{to_modes(modes)}; },
           py::arg("modes"))
      .def("set_memoryless_bath", [](SystemSpec& s, double chi0) { s.bath = MemorylessBath{chi0}; }, py::arg("chi0"))
      .def("validate", [](const SystemSpec& s) { return validate_spec(s); });

  py::class_<CoefficientSet>(m, "CoefficientSet")
      .def_readonly("grid", &CoefficientSet::grid)
      .def_readonly("alpha1", &CoefficientSet::alpha1)
      .def_readonly("alpha2", &CoefficientSet::alpha2)
      .def_readonly("zeta1", &CoefficientSet::zeta1)
      .def_readonly("zeta2", &CoefficientSet::zeta2)
      .def_readonly("m_coef", &CoefficientSet::m_coef)
      .def_readonly("n_coef", &CoefficientSet::n_coef)
      .def("__len__", &CoefficientSet::size)
      .def("commutator_defect", &commutator_defect, py::arg("index"))
      .def("eta", &eta, py::arg("index"), py::arg("beta"))
      .def("big_z", &big_z, py::arg("index"), py::arg("gamma"));

  m.def("propagate", [](const SystemSpec& s, const std::vector<double>& grid) { return propagate(s, grid); },
        py::arg("spec"), py::arg("grid"));

  py::class_<ReducedDensityMatrix>(m, "ReducedDensityMatrix")
      .def_readonly("t", &ReducedDensityMatrix::t)
      .def_readonly("n_cut", &ReducedDensityMatrix::n_cut)
      .def_readonly("rho", &ReducedDensityMatrix::rho)
      .def_readonly("trace_deficit", &ReducedDensityMatrix::trace_deficit)
      .def_property_readonly("method", [](const ReducedDensityMatrix& r) { return std::string(to_string(r.method)); })
      .def("hermiticity_defect", &ReducedDensityMatrix::hermiticity_defect)
      .def("min_eigenvalue", &ReducedDensityMatrix::min_eigenvalue);

  m.def(
      "rho_matrix",
      [](const CoefficientSet& cs, std::size_t index, cplx gamma, int n_cut, int min_n_cut) {
        RhoOptions o;
        o.n_cut = n_cut;
        o.min_n_cut = min_n_cut;
        return rho_matrix(cs, index, gamma, o);
      },
      py::arg("coefficients"), py::arg("index"), py::arg("gamma") = cplx{}, py::arg("n_cut") = -1,
      py::arg("min_n_cut") = 0);

  py::class_<PnResult>(m, "PnResult")
      .def_readonly("n", &PnResult::n)
      .def_readonly("p", &PnResult::p)
      .def_property_readonly("branch", [](const PnResult& r) { return std::string(to_string(r.branch)); });

  m.def("pn_laguerre", &pn_laguerre, py::arg("z"), py::arg("eta"), py::arg("n"));
  m.def("pn_poisson", &pn_poisson, py::arg("z"), py::arg("n"));
  m.def("resonant_poisson", &resonant_poisson, py::arg("zeta"), py::arg("n"));
  m.def("pn_hermite", &pn_hermite, py::arg("alpha1"), py::arg("alpha2"), py::arg("phi_i"), py::arg("zeta"),
        py::arg("n"), py::arg("s_max") = 400);
  m.def("mean_excitation", &mean_excitation, py::arg("z"), py::arg("eta"));
  m.def(
      "zeta_sinusoidal",
      [](double k0, double nu, double omega0, double phi_i, double t) {
        const auto z = zeta_sinusoidal(k0, nu, omega0, phi_i, t);
        return py::make_tuple(z.zeta1, z.zeta2, z.zeta);
      },
      py::arg("k0"), py::arg("nu"), py::arg("omega0"), py::arg("phi_i"), py::arg("t"));
  m.def(
      "large_time_limits",
      [](double k0, double nu, double omega0, double chi0, const std::vector<std::pair<double, cplx>>& modes,
         double beta) {
        const auto modes_ = to_modes(modes);
        const auto r = large_time_limits(k0, nu, omega0, chi0, modes_, beta);
        return py::make_tuple(r.z2, r.eta_inf);
      },
      py::arg("k0"), py::arg("nu"), py::arg("omega0"), py::arg("chi0"),
      py::arg("modes") = std::vector<std::pair<double, cplx>>{}, py::arg("beta") = kInf);

  m.def("laguerre", &specfun::laguerre, py::arg("n"), py::arg("x"));
  m.def("hermite", py::overload_cast<int, double>(&specfun::hermite), py::arg("n"), py::arg("x"));

  py::class_<RunConfig>(m, "RunConfig")
      .def_readonly("spec", &RunConfig::spec)
      .def_readonly("gamma", &RunConfig::gamma)
      .def_property_readonly("t_grid", [](const RunConfig& c) { return c.run.t_grid; })
      .def_property_readonly("n_cut", [](const RunConfig& c) { return c.run.n_cut; });
  m.def(
      "parse_config",
      [](const std::string& text, const std::vector<std::string>& overrides) {
        std::vector<Override> ov;
        for (const auto& o : overrides) ov.push_back(parse_override(o));
        return parse_config(text, ov);
      },
      py::arg("text"), py::arg("overrides") = std::vector<std::string>{});

  m.def("oracle_reduced", &oracle_reduced, py::arg("spec"), py::arg("gamma"), py::arg("times"), py::arg("n_sys"),
        py::arg("n_bath"), py::arg("thermal_tail_tolerance") = 1e-10);
}
