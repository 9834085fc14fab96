#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amp/errors.hpp"
#include "amp/experiments.hpp"

namespace py = pybind11;
using namespace amp;

namespace {

AmpParams params(int n, double a, double xp) {
  AmpParams p{n, a, xp};
  p.validate();
  return p;
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

EvolutionConfig evolution(std::optional<double> t_f, double max_dt) {
  EvolutionConfig c;
  if (t_f) c.t_f = *t_f;
  c.max_dt = max_dt;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the ampsim core library";

  py::register_exception<amp::InvalidInput>(m, "InvalidInput", PyExc_ValueError);

  m.def("classical_energy", [](int n, double a, double xp, double mag) {
    return classical_energy(params(n, a, xp), mag);
  }, py::arg("n"), py::arg("a"), py::arg("xp"), py::arg("m"));
  m.def("sector_energies", [](int n, double a, double xp) { return sector_energies(params(n, a, xp)); },
        py::arg("n"), py::arg("a"), py::arg("xp"));
  m.def("density_of_states", &density_of_states, py::arg("n"));

  m.def("standard_sets", [] {
    py::list out;
    for (const auto& s : DifficultyEnsemble::standard().sets)
      out.append(py::dict(py::arg("name") = s.name, py::arg("a") = s.a, py::arg("xp") = s.xp));
    return out;
  });
  m.def("scheme_kinds", [] {
    std::vector<std::string> out;
    for (auto k : all_scheme_kinds()) out.push_back(to_string(k));
    return out;
  });

  m.def("gap_profile", [](int n, double a, double xp, int resolution) {
    GapOptions o;
    o.resolution = resolution;
    const auto g = gap_profile(Uniform{}, params(n, a, xp), o);
    return py::dict(py::arg("s_min") = g.s_min, py::arg("delta_min") = g.delta_min, py::arg("s_grid") = g.s_grid,
                    py::arg("gaps") = g.gaps);
  }, py::arg("n"), py::arg("a"), py::arg("xp"), py::arg("resolution") = 200);

  m.def("critical_kappa", [](int n, double a, double xp) { return critical_kappa(params(n, a, xp)); },
        py::arg("n"), py::arg("a"), py::arg("xp"));
  m.def("forward_gap", [](int n, double a, double xp, bool corrected) {
    const auto p = params(n, a, xp);
    return forward_gap_sweep_units(p, critical_kappa(p), corrected);
  }, py::arg("n"), py::arg("a"), py::arg("xp"), py::arg("corrected") = true);

  m.def("success_probability", [](const std::string& scheme, int n, double a, double xp, std::uint64_t seed,
                                  std::optional<double> t_f, double max_dt) {
    py::gil_scoped_release release;
    const auto s = make_scheme(parse_scheme_kind(scheme), n, seed);
    return integrate(s, params(n, a, xp), evolution(t_f, max_dt)).success_probability();
  }, py::arg("scheme"), py::arg("n"), py::arg("a"), py::arg("xp"), py::arg("seed") = 1, py::arg("t_f") = py::none(),
        py::arg("max_dt") = 1.0);

  m.def("averaged_tts", [](const std::string& scheme, int n, double a, double xp, int draws, std::uint64_t seed,
                           std::optional<double> t_f) {
    TtsRecord rec;
    {
      py::gil_scoped_release release;
      rec = averaged_tts(parse_scheme_kind(scheme), params(n, a, xp), evolution(t_f, 1.0), draws, seed);
    }
    return to_python(rec.to_json());
  }, py::arg("scheme"), py::arg("n"), py::arg("a"), py::arg("xp"), py::arg("draws") = 1, py::arg("seed") = 1,
        py::arg("t_f") = py::none());

  m.def("tts", &tts, py::arg("t_f"), py::arg("p_success"));
  m.def("fit_exponential", [](const std::vector<std::pair<int, double>>& points) {
    const auto f = fit_exponential(points);
    return py::dict(py::arg("beta") = f.beta, py::arg("gamma") = f.gamma, py::arg("residual") = f.residual);
  }, py::arg("points"));
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));
}
