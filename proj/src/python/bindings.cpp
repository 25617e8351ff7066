#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tdd/experiments.hpp"
#include "tdd/parallel.hpp"

namespace py = pybind11;
using namespace tdd;

namespace {

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multiuser TDD downlink precoding simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SingularChannelError>(m, "SingularChannelError", PyExc_ArithmeticError);

  m.def("db_to_linear", &db_to_linear);
  m.def("linear_to_db", &linear_to_db);
  m.def("set_thread_count", &set_thread_count, py::arg("n"));

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("M", &SystemConfig::M)
      .def_readwrite("K", &SystemConfig::K)
      .def_readwrite("T", &SystemConfig::T)
      .def_readwrite("tau_r", &SystemConfig::tau_r)
      .def_readwrite("tau_f", &SystemConfig::tau_f)
      .def_readwrite("rho_f", &SystemConfig::rho_f)
      .def_readwrite("rho_r", &SystemConfig::rho_r)
      .def_readwrite("w", &SystemConfig::w)
      .def_readwrite("comp_delay", &SystemConfig::comp_delay)
      .def("est_vars", &SystemConfig::est_vars)
      .def("err_vars", &SystemConfig::err_vars)
      .def("data_symbols", &SystemConfig::data_symbols);
  m.def("validate_config", &validate_config, py::arg("cfg"));
  m.def("make_homogeneous", &make_homogeneous, py::arg("M"), py::arg("K"), py::arg("T"),
        py::arg("tau_r"), py::arg("rho_f"), py::arg("rho_r"), py::arg("tau_f") = 0);

  py::class_<GzfPrecoder>(m, "GzfPrecoder")
      .def_readonly("A", &GzfPrecoder::A)
      .def_readonly("chi", &GzfPrecoder::chi)
      .def_readonly("selection", &GzfPrecoder::selection);
  m.def("build_gzf", &build_gzf, py::arg("H_hat"), py::arg("p"),
        py::arg("selection") = std::vector<int>{});
  m.def(
      "optimize_precoder_params",
      [](const SystemConfig& cfg) { return optimize_precoder_params(cfg).p_bar.p; }, py::arg("cfg"));

  m.def(
      "draw_estimate",
      [](const SystemConfig& cfg, std::uint64_t seed) {
        RngStream rng(seed);
        const EstimateDraw d = draw_estimate_direct(cfg, rng);
        return py::make_tuple(d.channel.H, d.estimate.H_hat);
      },
      py::arg("cfg"), py::arg("seed"), "Returns (H, H_hat) for one coherence interval.");

  py::class_<Scheme>(m, "Scheme")
      .def(py::init(&Scheme::parse), py::arg("id"))
      .def_property_readonly("forward_pilots", [](const Scheme& s) { return s.forward_pilots; })
      .def_property_readonly("label", &Scheme::label)
      .def_property_readonly("id", &Scheme::id)
      .def("__repr__", [](const Scheme& s) { return "Scheme('" + s.id() + "')"; });

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("net", &RateReport::net)
      .def_readonly("weighted_sum", &RateReport::weighted_sum)
      .def_readonly("per_user_rate", &RateReport::per_user_rate)
      .def_readonly("tau_r", &RateReport::tau_r_used)
      .def_readonly("N", &RateReport::N_used)
      .def_readonly("half_width", &RateReport::half_width);
  m.def(
      "evaluate_scheme",
      [](const SystemConfig& cfg, const Scheme& s, int N, std::size_t trials, std::uint64_t seed) {
        return evaluate_scheme(cfg, s, N, plan_for_trials(trials), RngStream(seed));
      },
      py::arg("cfg"), py::arg("scheme"), py::arg("N"), py::arg("trials") = 2000, py::arg("seed") = 1);
  m.def(
      "evaluate_scheme_bound",
      [](const SystemConfig& cfg, const Scheme& s, int N, std::size_t trials, std::uint64_t seed) {
        return evaluate_scheme_bound(cfg, s, N, plan_for_trials(trials), RngStream(seed));
      },
      py::arg("cfg"), py::arg("scheme"), py::arg("N"), py::arg("trials") = 2000, py::arg("seed") = 1);

  m.def(
      "run_scenario",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::size_t> trials) {
        ScenarioSpec spec = parse_scenario(text);
        if (seed) spec.seed = *seed;
        if (trials) spec.trials = *trials;
        return rows_to_csv(run_scenario(spec));
      },
      py::arg("config"), py::arg("seed") = py::none(), py::arg("trials") = py::none(),
      "Runs a YAML scenario and returns the result CSV.");
  m.def(
      "reproduce_table1",
      [](std::uint64_t seed, std::size_t trials) { return rows_to_csv(reproduce_table1(seed, trials)); },
      py::arg("seed") = 1, py::arg("trials") = 10000);
}
