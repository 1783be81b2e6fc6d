#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bpsosc/gv.hpp"
#include "bpsosc/largen_tau.hpp"
#include "bpsosc/oscillator.hpp"
#include "bpsosc/rh_solver.hpp"
#include "bpsosc/scenario.hpp"
#include "bpsosc/specfun.hpp"
#include "bpsosc/tasks.hpp"

namespace py = pybind11;
using namespace bpsosc;

namespace {

using Matrix = std::array<std::array<cplx, 2>, 2>;

Matrix to_rows(const ComplexMatrix2& m) { return {{{m.a11, m.a12}, {m.a21, m.a22}}}; }

Rational rational_arg(const py::object& o) {
  if (py::isinstance<py::int_>(o)) return Rational(o.cast<long long>());
  return parse_rational(py::str(o).cast<std::string>(), "omega");
}

py::dict report_dict(const LimitReport& r) {
  py::dict d;
  d["truncations"] = r.truncations;
  d["partials"] = r.partials;
  d["target"] = r.target;
  d["abs_error"] = r.abs_error;
  d["fitted_order"] = r.fitted_order;
  d["extrapolated"] = r.extrapolated;
  d["extrapolated_error"] = r.extrapolated_error;
  return d;
}

BpsStructure structure_from(const std::string& path) { return load_scenario(path).structure(); }

}  // namespace

PYBIND11_MODULE(_bpsosc, m) {
  m.doc() = "Uncoupled BPS structures: oscillators, Stokes data, RH problems and large-N limits";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
  py::register_exception<SectorError>(m, "SectorError", base.ptr());

  m.def("log_gamma", &log_gamma, py::arg("z"));
  m.def("log_barnes_g", &log_barnes_g, py::arg("w"));
  m.def("log_lambda", &log_lambda, py::arg("w"));
  m.def("log_upsilon", &log_upsilon, py::arg("w"));
  m.def("binet_term", [](cplx z) { return binet_term(z); }, py::arg("z"));
  m.def("polylog_neg", &polylog_neg, py::arg("n"), py::arg("x"));
  m.def("bernoulli", [](int n) { return rational_string(bernoulli(n)); }, py::arg("n"),
        "Bernoulli number as a \"p/q\" string.");

  py::class_<SimpleOscillator>(m, "SimpleOscillator")
      .def(py::init([](int mult, std::int64_t pairing, const py::object& omega, cplx z_gamma, cplx z_beta,
                       double hbar) { return SimpleOscillator(mult, pairing, rational_arg(omega), z_gamma, z_beta, hbar); }),
           py::arg("m"), py::arg("pairing"), py::arg("omega"), py::arg("z_gamma"), py::arg("z_beta"), py::arg("hbar"))
      .def_property_readonly("coupling", &SimpleOscillator::coupling)
      .def_property_readonly("hbar", &SimpleOscillator::hbar)
      .def("stokes_analytic", [](const SimpleOscillator& o) {
        auto s = stokes_analytic(o);
        return py::make_tuple(to_rows(s.plus), to_rows(s.minus));
      })
      .def("stokes_numeric", [](const SimpleOscillator& o) {
        auto s = stokes_numeric(o);
        return py::make_tuple(to_rows(s.plus), to_rows(s.minus));
      })
      .def("stokes_hypergeometric", [](const SimpleOscillator& o) { return to_rows(stokes_via_hypergeometric(o)); })
      .def("picard", [](const SimpleOscillator& o, cplx t) { return to_rows(picard_solve(o, t)); }, py::arg("t"))
      .def("ode", [](const SimpleOscillator& o, cplx t) { return to_rows(fundamental_solution(o, t).psi); },
           py::arg("t"))
      .def("first_order", [](const SimpleOscillator& o, cplx t) { return to_rows(first_order_psi(o, t)); },
           py::arg("t"));

  m.def("psi_limit",
        [](const std::string& scenario, int j, cplx t, double hbar, const std::vector<int>& truncations) {
          return report_dict(psi_limit(structure_from(scenario), j, t, hbar, truncations));
        },
        py::arg("scenario"), py::arg("j"), py::arg("t"), py::arg("hbar"), py::arg("truncations"),
        "Large-N report for basis vector j of the structure in a scenario file.");
  m.def("binet_bridge",
        [](cplx z, const std::vector<int>& truncations) { return report_dict(binet_bridge(z, truncations)); },
        py::arg("z"), py::arg("truncations"));

  m.def("gv_coefficients",
        [](int chi, const std::map<std::string, std::pair<std::string, cplx>>& curves, int g_max) {
          CurveClassTable table;
          for (const auto& [label, c] : curves) table[label] = {parse_rational(c.first, label), c.second};
          auto gv = gv_series(chi, table, g_max);
          return gv.series.coefficients();
        },
        py::arg("chi"), py::arg("curves"), py::arg("g_max"),
        "Coefficients of the GV series in lambda; curves maps label -> (\"p/q\", v).");
  m.def("resum_check",
        [](cplx v, int genus, int window) {
          auto r = resum_check(v, genus, window);
          return py::make_tuple(r.lhs, r.rhs, r.error);
        },
        py::arg("v"), py::arg("genus"), py::arg("n_window"));

  m.def("load_scenario",
        [](const std::string& path) {
          auto sc = load_scenario(path);
          return py::make_tuple(sc.hash, sc.resolved().dump(), sc.defaults_applied);
        },
        py::arg("path"));
  m.def("task_names", &task_names);
  m.def("run",
        [](const std::string& task, const std::string& scenario, const std::string& out, int threads,
           std::optional<std::uint64_t> seed) {
          RunResult r;
          {
            py::gil_scoped_release release;
            r = run(RunOptions{task, scenario, out, threads, seed});
          }
          py::dict d;
          d["exit_code"] = r.exit_code;
          d["hash"] = r.hash;
          d["outputs"] = r.outputs;
          d["summary"] = r.summary;
          d["error"] = r.error;
          return d;
        },
        py::arg("task"), py::arg("scenario"), py::arg("out"), py::arg("threads") = 1, py::arg("seed") = py::none(),
        "Same as the command line tool; returns the exit code and the written files.");
}
