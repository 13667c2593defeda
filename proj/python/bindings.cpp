#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qeit/errors.hpp"
#include "qeit/oracle.hpp"
#include "qeit/sweep.hpp"
#include "qeit/validation.hpp"

namespace py = pybind11;
using namespace qeit;

namespace {

template <class T>
std::string repr_of(const char* prefix, const T& state) {
  return std::string("<") + prefix + " " + to_string(state) + ">";
}

py::dict row_dict(const SweepRow& r) {
  py::dict d;
  d["omega"] = r.omega;
  d["gamma0"] = r.gamma0;
  d["T"] = r.T;
  d["F"] = r.F;
  d["dT"] = r.dT;
  d["dF"] = r.dF;
  d["c1"] = r.c1;
  d["g"] = r.g;
  d["n_p0"] = r.n_p0;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Probe transmittance and fidelity in a quantized-coupling EIT medium.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);

  py::class_<EitConfig>(m, "EitConfig")
      .def(py::init([](double gamma0, cplx omega_c, double alpha, double g) {
             EitConfig c;
             c.gamma0 = gamma0;
             c.omega_c = omega_c;
             c.alpha = alpha;
             c.g = g;
             c.validate();
             return c;
           }),
           py::arg("gamma0") = 0.0, py::arg("omega_c") = cplx{0.5}, py::arg("alpha") = 200.0,
           py::arg("g") = 0.05)
      .def_readwrite("gamma0", &EitConfig::gamma0)
      .def_readwrite("omega_c", &EitConfig::omega_c)
      .def_readwrite("alpha", &EitConfig::alpha)
      .def_readwrite("g", &EitConfig::g)
      .def_property_readonly_static("gamma", [](py::object) { return EitConfig::gamma; })
      .def("validate", &EitConfig::validate)
      .def("__repr__", [](const EitConfig& c) {
        std::ostringstream os;
        os << "EitConfig(gamma0=" << c.gamma0 << ", omega_c=" << c.omega_c << ", alpha=" << c.alpha
           << ", g=" << c.g << ")";
        return os.str();
      });

  py::class_<CoherentProbe>(m, "CoherentProbe")
      .def(py::init<cplx>(), py::arg("beta") = cplx{1.0})
      .def_readwrite("beta", &CoherentProbe::beta)
      .def("__repr__", [](const CoherentProbe& p) { return repr_of("probe", ProbeState{p}); });
  py::class_<FockProbe>(m, "FockProbe")
      .def(py::init<int>(), py::arg("n") = 1)
      .def_readwrite("n", &FockProbe::n)
      .def("__repr__", [](const FockProbe& p) { return repr_of("probe", ProbeState{p}); });
  py::class_<CoherentCoupling>(m, "CoherentCoupling")
      .def(py::init<cplx>(), py::arg("beta") = cplx{1.0})
      .def_readwrite("beta", &CoherentCoupling::beta)
      .def("__repr__", [](const CoherentCoupling& c) { return repr_of("coupling", CouplingState{c}); });
  py::class_<SqueezedCoupling>(m, "SqueezedCoupling")
      .def(py::init<cplx, double, double>(), py::arg("beta") = cplx{1.0}, py::arg("r") = 0.0,
           py::arg("theta") = 0.0)
      .def_readwrite("beta", &SqueezedCoupling::beta)
      .def_readwrite("r", &SqueezedCoupling::r)
      .def_readwrite("theta", &SqueezedCoupling::theta)
      .def("__repr__", [](const SqueezedCoupling& c) { return repr_of("coupling", CouplingState{c}); });

  py::class_<PropagationCoefficients>(m, "PropagationCoefficients")
      .def_readonly("x0", &PropagationCoefficients::x0)
      .def_readonly("xa", &PropagationCoefficients::xa)
      .def_readonly("xb", &PropagationCoefficients::xb)
      .def_readonly("xc", &PropagationCoefficients::xc)
      .def_readonly("c1", &PropagationCoefficients::c1)
      .def_readonly("mu_b", &PropagationCoefficients::mu_b)
      .def_readonly("mu_c", &PropagationCoefficients::mu_c);

  py::class_<SecondMoments>(m, "SecondMoments")
      .def_readonly("nn", &SecondMoments::nn)
      .def_readonly("aa", &SecondMoments::aa)
      .def_readonly("cc", &SecondMoments::cc)
      .def_readonly("an", &SecondMoments::an);

  py::class_<TruncationPolicy>(m, "TruncationPolicy")
      .def(py::init([](int dim, double tail_tol, double l_tol, int l_window, int l_cap) {
             return TruncationPolicy{dim, tail_tol, l_tol, l_window, l_cap};
           }),
           py::arg("dim") = 0, py::arg("tail_tol") = 1e-10, py::arg("l_tol") = 1e-12,
           py::arg("l_window") = 5, py::arg("l_cap") = 500)
      .def_readwrite("dim", &TruncationPolicy::dim)
      .def_readwrite("tail_tol", &TruncationPolicy::tail_tol)
      .def_readwrite("l_tol", &TruncationPolicy::l_tol)
      .def_readwrite("l_window", &TruncationPolicy::l_window)
      .def_readwrite("l_cap", &TruncationPolicy::l_cap);

  py::class_<EngineDiagnostics>(m, "EngineDiagnostics")
      .def_readonly("l_max_used", &EngineDiagnostics::l_max_used)
      .def_readonly("dim_used", &EngineDiagnostics::dim_used)
      .def_readonly("trace_defect", &EngineDiagnostics::trace_defect)
      .def_readonly("min_eigenvalue", &EngineDiagnostics::min_eigenvalue);

  py::class_<EngineResult>(m, "EngineResult")
      .def_readonly("T", &EngineResult::T)
      .def_readonly("F", &EngineResult::F)
      .def_readonly("delta_T", &EngineResult::delta_T)
      .def_readonly("delta_F", &EngineResult::delta_F)
      .def_readonly("coefficients", &EngineResult::coefficients)
      .def_readonly("diagnostics", &EngineResult::diagnostics)
      .def_property_readonly("rho", [](const EngineResult& r) -> py::object {
        if (!r.rho) return py::none();
        return py::cast(r.rho->entries);
      });

  m.def("propagation_coefficients", &propagation_coefficients, py::arg("cfg"),
        py::arg("omega") = 0.0, py::arg("probe_amp") = cplx{1.0});
  m.def("second_moments", &second_moments, py::arg("coupling"));
  m.def("c2_moments", &c2_moments, py::arg("j"), py::arg("k"), py::arg("mu_b"), py::arg("mu_c"),
        py::arg("moments"));

  m.def("transmittance", &transmittance, py::arg("cfg"), py::arg("omega"), py::arg("probe"),
        py::arg("coupling") = CouplingState{CoherentCoupling{}});
  m.def(
      "output_density_matrix",
      [](const EitConfig& cfg, double omega, const ProbeState& probe,
         const CouplingState& coupling, const TruncationPolicy& trunc) {
        return output_density_matrix(cfg, omega, probe, coupling, trunc).entries;
      },
      py::arg("cfg"), py::arg("omega"), py::arg("probe"),
      py::arg("coupling") = CouplingState{CoherentCoupling{}}, py::arg("trunc") = TruncationPolicy{});
  m.def("fidelity", &fidelity, py::arg("cfg"), py::arg("omega"), py::arg("probe"),
        py::arg("coupling") = CouplingState{CoherentCoupling{}}, py::arg("trunc") = TruncationPolicy{});
  m.def("delta_metrics", &delta_metrics, py::arg("cfg"), py::arg("omega"), py::arg("probe"),
        py::arg("coupling") = CouplingState{CoherentCoupling{}}, py::arg("trunc") = TruncationPolicy{});
  m.def(
      "evaluate",
      [](const EitConfig& cfg, double omega, const ProbeState& probe,
         const CouplingState& coupling, const TruncationPolicy& trunc, bool keep_rho,
         bool with_deltas) {
        EvaluateOptions opt;
        opt.keep_rho = keep_rho;
        opt.with_deltas = with_deltas;
        return evaluate(cfg, omega, probe, coupling, trunc, opt);
      },
      py::arg("cfg"), py::arg("omega"), py::arg("probe"),
      py::arg("coupling") = CouplingState{CoherentCoupling{}}, py::arg("trunc") = TruncationPolicy{},
      py::arg("keep_rho") = false, py::arg("with_deltas") = true);

  m.def(
      "oracle",
      [](const EitConfig& cfg, double omega, const ProbeState& probe,
         const CouplingState& coupling, int dim_p, int dim_c, bool operator_convention) {
        const auto conv = operator_convention ? oracle::SqueezeConvention::PublishedOperator
                                              : oracle::SqueezeConvention::MatchPublishedMoments;
        const auto r = oracle::oracle_output_rho(cfg, omega, probe, coupling, {dim_p, dim_c}, {}, conv);
        py::dict d;
        d["rho"] = r.rho.entries;
        d["T"] = r.T;
        d["F"] = r.F;
        d["l_max_used"] = r.l_max_used;
        return d;
      },
      py::arg("cfg"), py::arg("omega"), py::arg("probe"),
      py::arg("coupling") = CouplingState{CoherentCoupling{}}, py::arg("dim_p") = 30,
      py::arg("dim_c") = 40, py::arg("operator_convention") = false,
      "Brute-force output state on a truncated probe (x) coupling space.");

  m.def(
      "validate",
      [](double g, double alpha, double omega_c, double bound) {
        ValidationOptions opt;
        opt.g = g;
        opt.alpha = alpha;
        opt.omega_c = omega_c;
        opt.bound = bound;
        const auto r = run_validation(opt);
        py::dict d;
        d["max_dev_T"] = r.max_dev_T;
        d["max_dev_F"] = r.max_dev_F;
        d["bound"] = r.bound;
        d["passed"] = r.passed;
        d["entries"] = r.entries.size();
        return d;
      },
      py::arg("g") = 0.05, py::arg("alpha") = 50.0, py::arg("omega_c") = 0.5,
      py::arg("bound") = 1e-3);

  m.def("preset_names", &preset_names);
  m.def(
      "sweep",
      [](const std::string& preset_name, std::optional<std::vector<double>> range, bool log,
         unsigned threads) {
        SweepSpec spec = preset(preset_name);
        if (range) {
          if (range->size() != 3) throw std::invalid_argument("range must be (start, stop, points)");
          spec.start = (*range)[0];
          spec.stop = (*range)[1];
          spec.points = static_cast<int>((*range)[2]);
          spec.spacing = log ? Spacing::Log : Spacing::Linear;
          spec.prepend_zero = false;
        }
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(spec, threads);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("preset"), py::arg("range") = py::none(), py::arg("log") = false,
      py::arg("threads") = 0u, "Run a figure preset; returns one dict per grid point.");

  m.def("parse_probe", &parse_probe, py::arg("text"));
  m.def("parse_coupling", &parse_coupling, py::arg("text"));
}
