#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlcd/experiments.hpp"
#include "nlcd/io.hpp"
#include "nlcd/metrics.hpp"

namespace py = pybind11;

namespace {

nlcd::json config_from(const std::string& text) {
  return nlcd::effective_config(text.empty() ? nlcd::json::object() : nlcd::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "nonlocal convection-diffusion rarefaction solver";

  py::register_exception<nlcd::Error>(m, "NlcdError");

  m.def("rarefaction",
        [](double um, double up, double x, double t) {
          return nlcd::rarefaction(nlcd::RiemannData(um, up), x, t);
        },
        py::arg("u_minus"), py::arg("u_plus"), py::arg("x"), py::arg("t"));

  m.def("viscous_profile",
        [](double um, double up, double x, double t) {
          return nlcd::viscous_profile(nlcd::RiemannData(um, up), x, t);
        },
        py::arg("u_minus"), py::arg("u_plus"), py::arg("x"), py::arg("t"));

  m.def("kernel_weights",
        [](const std::string& family, double param, double spacing, double tol) {
          nlcd::KernelSpec spec;
          if (family == "exponential") {
            spec = nlcd::make_exponential_kernel(param);
          } else if (family == "gaussian") {
            spec = nlcd::make_gaussian_kernel(param);
          } else if (family == "bump") {
            spec = nlcd::make_bump_kernel(param);
          } else {
            throw nlcd::Error(nlcd::ErrorCode::InvalidArgument, "unknown kernel family " + family);
          }
          const nlcd::DiscreteKernel k = nlcd::discretize_kernel(spec, spacing, tol);
          return py::make_tuple(k.weights, k.tail_mass_left, k.tail_mass_right);
        },
        py::arg("family"), py::arg("param"), py::arg("spacing"), py::arg("tol") = 1e-12);

  m.def("apply_L",
        [](const std::string& config_text, std::vector<double> values) {
          const nlcd::Problem prob = nlcd::build_problem(config_from(config_text));
          nlcd::FieldState state = nlcd::initial_state(prob);
          if (!values.empty()) {
            if (static_cast<int>(values.size()) != state.grid.n) {
              throw nlcd::Error(nlcd::ErrorCode::InvalidArgument,
                                "values length does not match the configured grid");
            }
            state.values = std::move(values);
          }
          const nlcd::NonlocalOp op = nlcd::make_operator(prob);
          return nlcd::apply_L(op, state);
        },
        py::arg("config") = "", py::arg("values") = std::vector<double>());

  m.def("run",
        [](const std::string& config_text) {
          const nlcd::Problem prob = nlcd::build_problem(config_from(config_text));
          const nlcd::Trajectory traj = nlcd::run_problem(prob);
          py::list snapshots;
          auto pack = [](const nlcd::FieldState& s) {
            py::dict d;
            d["time"] = s.time;
            std::vector<double> xs(static_cast<size_t>(s.grid.n));
            for (int i = 0; i < s.grid.n; ++i) xs[static_cast<size_t>(i)] = s.grid.x(i);
            d["x"] = xs;
            d["u"] = s.values;
            return d;
          };
          snapshots.append(pack(traj.initial));
          for (const nlcd::FieldState& s : traj.snapshots) snapshots.append(pack(s));
          return snapshots;
        },
        py::arg("config") = "");

  m.def("error_to_rarefaction",
        [](const std::string& config_text, double p) {
          const nlcd::Problem prob = nlcd::build_problem(config_from(config_text));
          const nlcd::Trajectory traj = nlcd::run_problem(prob);
          py::list rows;
          for (const nlcd::FieldState& s : traj.snapshots) {
            if (s.time > 0.0) {
              rows.append(py::make_tuple(s.time, nlcd::error_to_rarefaction(s, prob.riemann, p)));
            }
          }
          return rows;
        },
        py::arg("config") = "", py::arg("p") = 1.0);

  m.attr("P_INF") = nlcd::kPInf;
}
