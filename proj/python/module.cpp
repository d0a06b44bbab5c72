#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stereo/classical.hpp"
#include "stereo/errors.hpp"
#include "stereo/forward.hpp"
#include "stereo/io.hpp"
#include "stereo/simulate.hpp"
#include "stereo/unfold.hpp"

namespace py = pybind11;
using namespace stereo;

namespace {

ScaleMode scale_mode(std::optional<double> scale) {
  if (scale) return Explicit{*scale};
  return Normalize{};
}

SolveOptions solve_options(std::optional<double> mu, std::optional<double> scale, double tol) {
  SolveOptions o;
  o.mu = mu;
  o.scale = scale_mode(scale);
  o.inversion.tol = tol;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mellin-transform unfolding of section-size distributions";

  auto error = py::register_exception<Error>(m, "StereoError", PyExc_RuntimeError);
  py::register_exception<PreconditionFailed>(m, "PreconditionFailed", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());

  py::enum_<SectionMode>(m, "SectionMode")
      .value("plane", SectionMode::plane)
      .value("line", SectionMode::line);

  py::class_<Histogram>(m, "Histogram")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("edges"), py::arg("counts"))
      .def_readwrite("edges", &Histogram::edges)
      .def_readwrite("counts", &Histogram::counts)
      .def("total", &Histogram::total);

  py::class_<SupportedDensity>(m, "SupportedDensity")
      .def("__call__", &SupportedDensity::operator())
      .def_property_readonly("name", &SupportedDensity::name)
      .def_property_readonly("support_upper", &SupportedDensity::support_upper)
      .def_property_readonly("mass", &SupportedDensity::mass)
      .def("mellin", [](const SupportedDensity& f, cplx s) { return f.image()(s); });

  py::class_<SectionKernel>(m, "SectionKernel")
      .def_property_readonly("mode", &SectionKernel::mode)
      .def_property_readonly("max_section", &SectionKernel::max_section)
      .def("phi", [](const SectionKernel& k, double x) { return k.phi()(x); })
      .def("phi_star", [](const SectionKernel& k, cplx s) { return k.phi_star()(s); })
      .def("cdf", &SectionKernel::cdf)
      .def("quantile", &SectionKernel::quantile);

  py::class_<SizeDistribution>(m, "SizeDistribution")
      .def("__call__", &SizeDistribution::operator())
      .def_property_readonly("support", [](const SizeDistribution& H) {
        return py::make_tuple(H.support().lo, H.support().hi);
      })
      .def_property_readonly("normalizable", &SizeDistribution::normalizable)
      .def_property_readonly("normalization", &SizeDistribution::normalization);

  py::class_<SolveReport>(m, "SolveReport")
      .def_property_readonly("mu_used", [](const SolveReport& r) { return r.preconditions.mu_used; })
      .def_property_readonly("strip_ok", [](const SolveReport& r) { return r.preconditions.strip_ok; })
      .def_property_readonly("quotient_integrable",
                             [](const SolveReport& r) { return r.preconditions.quotient_integrable; })
      .def_readonly("residual_sup_norm", &SolveReport::residual_sup_norm)
      .def_readonly("residual_l1_norm", &SolveReport::residual_l1_norm)
      .def_readonly("scale_constant", &SolveReport::scale_constant)
      .def_readonly("normalizable", &SolveReport::normalizable)
      .def_readonly("bandwidth", &SolveReport::bandwidth)
      .def_readonly("warnings", &SolveReport::warnings)
      .def("to_json", [](const SolveReport& r) { return to_json(r).dump(); });

  py::class_<ClassicalSolution>(m, "ClassicalSolution")
      .def_readonly("H", &ClassicalSolution::H)
      .def_readonly("scale_constant", &ClassicalSolution::scale_constant)
      .def_property_readonly("point_masses",
                             [](const ClassicalSolution& s) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& p : s.point_masses) out.emplace_back(p.location, p.mass);
                               return out;
                             })
      .def_readonly("warnings", &ClassicalSolution::warnings);

  m.def("uniform_density", &uniform_density, py::arg("c"));
  m.def("triangle_density", &triangle_density);
  m.def("quadratic_density", &quadratic_density);
  m.def("density_from_histogram",
        [](const Histogram& h) { return density_from_histogram(h); }, py::arg("histogram"));
  m.def("spline_density", [](std::vector<double> x, std::vector<double> y) { return spline_density(x, y); },
        py::arg("x"), py::arg("y"));
  m.def("parse_density", &parse_density, py::arg("spec"));

  m.def("sphere_plane_kernel", &sphere_plane_kernel);
  m.def("sphere_line_kernel", &sphere_line_kernel);
  m.def("nearly_sphere_plane_kernel", &nearly_sphere_plane_kernel, py::arg("sigma_m"), py::arg("p"));
  m.def("parse_kernel", &parse_kernel, py::arg("spec"), py::arg("mode"));

  m.def("parse_distribution", &parse_distribution, py::arg("spec"));
  m.def("bump_distribution", &bump_distribution, py::arg("a"), py::arg("b"));

  auto solve = [](SectionMode mode) {
    return [mode](const SupportedDensity& h, const SectionKernel& k, std::optional<double> mu,
                  std::optional<double> scale, double tol) {
      auto o = solve_options(mu, scale, tol);
      std::optional<UnfoldResult> r;
      {
        py::gil_scoped_release release;
        r.emplace(mode == SectionMode::plane ? solve_plane(h, k, o) : solve_line(h, k, o));
      }
      return py::make_tuple(r->H, r->report);
    };
  };
  m.def("solve_plane", solve(SectionMode::plane), py::arg("h"), py::arg("kernel"), py::arg("mu") = py::none(),
        py::arg("scale") = py::none(), py::arg("tol") = 1e-6);
  m.def("solve_line", solve(SectionMode::line), py::arg("h"), py::arg("kernel"), py::arg("mu") = py::none(),
        py::arg("scale") = py::none(), py::arg("tol") = 1e-6);

  m.def("abel_solve_plane",
        [](const SupportedDensity& h, std::optional<double> scale) { return abel_solve_plane(h, true, scale_mode(scale)); },
        py::arg("h"), py::arg("scale") = py::none());
  m.def("generalized_abel_solve",
        [](const SupportedDensity& h, const SectionKernel& k, std::optional<double> scale) {
          return generalized_abel_solve(h, k, scale_mode(scale));
        },
        py::arg("h"), py::arg("kernel"), py::arg("scale") = py::none());
  m.def("derivative_solve_line",
        [](const SupportedDensity& h, std::optional<double> scale) { return derivative_solve_line(h, scale_mode(scale)); },
        py::arg("h"), py::arg("scale") = py::none());

  m.def("forward", &forward, py::arg("H"), py::arg("kernel"), py::arg("x"), py::arg("scale") = 1.0,
        py::arg("tol") = 1e-10, py::arg("abs_tol") = 0.0);
  m.def("residual",
        [](const SizeDistribution& H, const SupportedDensity& h, const SectionKernel& k, double scale) {
          auto r = residual(H, h, k, k.mode(), scale);
          return py::make_tuple(r.sup_norm, r.l1_norm, r.target_sup);
        },
        py::arg("H"), py::arg("h"), py::arg("kernel"), py::arg("scale") = 1.0);
  m.def("moment_identities", [](const SectionKernel& k) {
    auto c = moment_identities(k);
    return c.plane_mean ? *c.plane_mean : *c.line_mean;
  });

  m.def("sample_sections",
        [](const SizeDistribution& H, const SectionKernel& k, std::uint64_t n, std::uint64_t seed, unsigned threads) {
          SimConfig cfg{k.mode(), H, k, n, seed, 100, threads};
          py::gil_scoped_release release;
          return sample_sections(cfg);
        },
        py::arg("H"), py::arg("kernel"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 0);
  m.def("simulate_sections",
        [](const SizeDistribution& H, const SectionKernel& k, std::uint64_t n, std::uint64_t seed, int bins) {
          SimConfig cfg{k.mode(), H, k, n, seed, bins};
          py::gil_scoped_release release;
          return simulate_sections(cfg);
        },
        py::arg("H"), py::arg("kernel"), py::arg("n"), py::arg("seed") = 0, py::arg("bins") = 100);
}
