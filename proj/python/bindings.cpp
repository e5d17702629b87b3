#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mellinstat/cli.hpp"
#include "mellinstat/distributions.hpp"
#include "mellinstat/errors.hpp"
#include "mellinstat/estimation.hpp"
#include "mellinstat/family_io.hpp"
#include "mellinstat/mellin_oracle.hpp"
#include "mellinstat/sampling.hpp"
#include "mellinstat/simulation.hpp"
#include "mellinstat/specfun.hpp"
#include "mellinstat/verification.hpp"

namespace py = pybind11;
using namespace mellinstat;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

DistributionSpec spec_from_kwargs(const std::string& family, const py::kwargs& kwargs) {
  std::map<std::string, double> params;
  for (const auto& [k, v] : kwargs) params[py::cast<std::string>(k)] = py::cast<double>(v);
  return make_spec(parse_family(family), params);
}

py::dict stats_dict(const LogStats& s) {
  py::dict d;
  d["order"] = s.order;
  d["log_moments"] = s.log_moments;
  d["log_cumulants"] = s.log_cumulants;
  return d;
}

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["spec"] = f.spec;
  d["iterations"] = f.iterations;
  d["residual"] = f.residual;
  d["converged"] = f.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Second-kind (Mellin) statistics for clutter distributions";

  auto domain_error = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<OutOfRange>(m, "OutOfRange", domain_error.ptr());
  py::register_exception<MomentDoesNotExist>(m, "MomentDoesNotExist", PyExc_ValueError);
  auto non_convergence = py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception<FitNonConvergence>(m, "FitNonConvergence", non_convergence.ptr());
  py::register_exception<NoSolution>(m, "NoSolution", PyExc_RuntimeError);
  py::register_exception<UnsupportedOrder>(m, "UnsupportedOrder", PyExc_ValueError);
  py::register_exception<ZeroSamples>(m, "ZeroSamples", PyExc_ValueError);
  py::register_exception<TooFewSamples>(m, "TooFewSamples", PyExc_ValueError);

  m.def("ln_gamma", &ln_gamma, py::arg("x"));
  m.def("digamma", &digamma, py::arg("x"));
  m.def("polygamma", &polygamma, py::arg("order"), py::arg("x"));
  m.def("bessel_k", &bessel_k, py::arg("nu"), py::arg("x"));

  py::class_<DistributionSpec>(m, "DistributionSpec")
      .def(py::init(&spec_from_kwargs), py::arg("family"))
      .def_property_readonly("family", [](const DistributionSpec& s) { return family_key(s.family()); })
      .def_property_readonly("params", &spec_params)
      .def_property_readonly("is_compound", &DistributionSpec::is_compound)
      .def("__eq__", [](const DistributionSpec& a, const DistributionSpec& b) { return a == b; })
      .def("__repr__", [](const DistributionSpec& s) { return "<DistributionSpec " + describe(s) + ">"; })
      .def("__str__", &describe);

  m.def("families", [] {
    std::vector<std::string> keys;
    for (Family f : all_families()) keys.push_back(family_key(f));
    return keys;
  });
  m.def("parameter_names", [](const std::string& family) { return parameter_names(parse_family(family)); });

  m.def("pdf", py::vectorize([](DistributionSpec s, double x) { return pdf(s, x); }), py::arg("spec"),
        py::arg("x"));
  m.def("chf2", py::vectorize([](DistributionSpec s, double v) { return chf2_analytic(s, v); }),
        py::arg("spec"), py::arg("s"));
  m.def("classical_moment", &classical_moment, py::arg("spec"), py::arg("n"));
  m.def("log_cumulants", &log_cumulants_analytic, py::arg("spec"), py::arg("n_max") = 4);
  m.def("strip", [](const DistributionSpec& s) {
    const Strip st = analyticity_strip(s);
    return py::make_tuple(st.lower, st.upper);
  });
  m.def("components", [](const DistributionSpec& s) -> py::object {
    const auto c = components(s);
    if (!c) return py::none();
    return py::make_tuple(c->speckle, c->texture);
  });

  m.def("mellin_numeric", [](const std::function<double(double)>& f, double s) { return mellin_numeric(f, s); },
        py::arg("density"), py::arg("s"));
  m.def("moments_to_cumulants", [](const std::vector<double>& v) { return moments_to_cumulants(v); });
  m.def("cumulants_to_moments", [](const std::vector<double>& v) { return cumulants_to_moments(v); });
  m.def("verify_convolution", [](const DistributionSpec& s, const std::vector<double>& grid) {
    return verify_convolution(s, grid);
  });

  m.def(
      "sample",
      [](const DistributionSpec& s, std::size_t n, std::uint64_t seed) {
        const auto b = sample(s, n, seed);
        py::dict d;
        d["values"] = to_array(b.values);
        d["texture"] = b.texture ? py::object(to_array(*b.texture)) : py::object(py::none());
        return d;
      },
      py::arg("spec"), py::arg("n"), py::arg("seed"));
  m.def(
      "sample_compound",
      [](const DistributionSpec& speckle, const DistributionSpec& texture, std::size_t n, std::uint64_t seed) {
        const auto b = sample_compound(speckle, texture, n, seed);
        py::dict d;
        d["values"] = to_array(b.values);
        d["texture"] = to_array(*b.texture);
        d["speckle"] = to_array(*b.speckle);
        return d;
      },
      py::arg("speckle"), py::arg("texture"), py::arg("n"), py::arg("seed"));

  m.def(
      "empirical_log_stats",
      [](const std::vector<double>& values, int n_max) {
        const auto e = empirical_log_stats(values, n_max);
        py::dict d = stats_dict(e.stats);
        d["cumulant_stderr"] = e.cumulant_stderr;
        d["cumulant_stderr_asymptotic"] = e.cumulant_stderr_asymptotic;
        d["moment_stderr"] = e.moment_stderr;
        d["count"] = e.count;
        return d;
      },
      py::arg("values"), py::arg("n_max") = 4);
  m.def("invert_polygamma", &invert_polygamma, py::arg("order"), py::arg("target"));
  m.def(
      "fit_molc",
      [](const std::string& family, const std::vector<double>& cumulants, std::optional<double> known_c) {
        FitOptions options;
        options.known_c = known_c;
        return fit_dict(fit_molc(parse_family(family), LogStats::from_cumulants(cumulants), options));
      },
      py::arg("family"), py::arg("log_cumulants"), py::arg("known_c") = py::none());
  m.def(
      "texture_log_cumulants",
      [](const std::vector<double>& cumulants, const DistributionSpec& speckle) {
        return texture_log_cumulants(LogStats::from_cumulants(cumulants), speckle).log_cumulants;
      },
      py::arg("log_cumulants"), py::arg("speckle"));

  m.def(
      "simulate",
      [](double L, double mu, const std::string& grid, std::size_t samples, std::uint64_t seed) {
        SweepConfig cfg;
        cfg.L = L;
        cfg.mu = mu;
        cfg.M_grid = parse_grid(grid);
        cfg.samples = samples;
        cfg.seed = seed;
        py::list rows;
        for (const auto& r : run_sweep(cfg)) {
          py::dict d;
          d["M"] = r.M;
          d["order"] = r.order;
          d["logmoment_data"] = r.logmoment_data;
          d["logcumulant_texture_est"] = r.logcumulant_texture_est;
          d["logcumulant_texture_analytic"] = r.logcumulant_texture_analytic;
          d["stderr"] = r.standard_error;
          rows.append(d);
        }
        return rows;
      },
      py::arg("L") = 4.0, py::arg("mu") = 1.0, py::arg("M_grid") = "0.25:20:40:log", py::arg("samples") = 100000,
      py::arg("seed") = 1);

  m.def(
      "verify",
      [](const std::vector<std::string>& families, std::optional<double> tolerance) {
        VerifyOptions options;
        options.tolerance = tolerance;
        for (const auto& f : families) options.families.push_back(parse_family(f));
        py::list out;
        for (const auto& c : run_verification(options).checks) {
          py::dict d;
          d["group"] = c.group;
          d["target"] = c.target;
          d["passed"] = c.passed;
          d["max_error"] = c.max_error;
          d["gate"] = c.gate;
          d["detail"] = c.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("families") = std::vector<std::string>{}, py::arg("tolerance") = py::none());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
