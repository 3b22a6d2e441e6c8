#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcool/channel.hpp"
#include "qcool/cli/commands.hpp"
#include "qcool/entanglement.hpp"
#include "qcool/limits.hpp"
#include "qcool/photonics.hpp"
#include "qcool/tomography.hpp"

namespace py = pybind11;
using namespace qcool;

namespace {

DensityMatrix two_qubit(const Matrix& m) { return DensityMatrix(m, {2, 2}); }

py::dict tally_dict(const CoincidenceTally& t) {
  const auto e = t.empirical();
  const auto [c, se] = t.photonic_constraint();
  py::dict d;
  d["duration"] = t.duration;
  d["n_triple"] = t.n_triple();
  d["n_success"] = t.n_success;
  d["n_flip"] = t.n_flip;
  d["n_loss"] = t.n_loss;
  d["n_heralded"] = t.n_heralded();
  d["P_S"] = e.success;
  d["P_F"] = e.flip;
  d["P_L"] = e.loss;
  d["se"] = py::make_tuple(e.se_success, e.se_flip, e.se_loss);
  d["constraint"] = c;
  d["constraint_se"] = se;
  return d;
}

RateConfig rates(double singlet_rate, double singles, double noise, double window, double excited) {
  RateConfig r;
  r.rate_singlet = singlet_rate;
  r.rate_singles = singles;
  r.rate_noise = noise;
  r.window = window;
  r.noise_excited = excited;
  return r;
}

}  // namespace

PYBIND11_MODULE(_qcool, m) {
  m.doc() = "Cooling limits for entanglement-preserving channels";

  py::register_exception<NoBracketError>(m, "NoBracketError", PyExc_RuntimeError);
  py::register_exception<MonotonicityError>(m, "MonotonicityError", PyExc_RuntimeError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("uncond_boundary", &uncond_boundary, py::arg("p_t"));
  m.def("cond_boundary", &cond_boundary, py::arg("p_tl"));
  m.def("high_temp_boundary", &high_temp_boundary, py::arg("loss"));
  m.def("uncond_approx_ok", &uncond_approx_ok, py::arg("success"), py::arg("p_t"));
  m.def("cond_approx_ok", &cond_approx_ok, py::arg("success"), py::arg("p_t"), py::arg("loss"));
  m.def(
      "critical_ps_numeric",
      [](double p_t, double loss, const std::string& route, double tol) {
        if (route != "unconditional" && route != "conditional") {
          throw py::value_error("route must be 'unconditional' or 'conditional'");
        }
        return critical_ps_numeric(p_t, loss, route == "conditional" ? Route::conditional : Route::unconditional,
                                   tol);
      },
      py::arg("p_t"), py::arg("loss"), py::arg("route") = "conditional", py::arg("tol") = kBisectionTol);
  m.def(
      "evaluate_limits",
      [](double p_t, double success, double loss) {
        const auto v = evaluate_limits(p_t, success, loss);
        py::dict d;
        d["unconditional_ok"] = v.unconditional_ok;
        d["conditional_ok"] = v.conditional_ok;
        d["uncond_boundary"] = v.uncond_boundary_ps;
        d["cond_boundary"] = v.cond_boundary_ps;
        d["class"] = to_string(classify(v.unconditional_ok, v.conditional_ok));
        return d;
      },
      py::arg("p_t"), py::arg("success"), py::arg("loss"));

  m.def(
      "singlet", [] { return singlet().data(); });
  m.def(
      "unconditional_state",
      [](double success, double p_t) { return unconditional_state(success, EnvironmentSpec(p_t)).data(); },
      py::arg("success"), py::arg("p_t"));
  m.def(
      "tripartite_state",
      [](double s, double f, double l, double p_t) {
        return tripartite_state(ChannelParams(s, f, l), EnvironmentSpec(p_t)).data();
      },
      py::arg("success"), py::arg("flip"), py::arg("loss"), py::arg("p_t"));
  m.def(
      "conditional_state",
      [](double s, double f, double l, double p_t) {
        const auto h = conditional_state(ChannelParams(s, f, l), EnvironmentSpec(p_t));
        return py::make_tuple(h.state.data(), h.weight);
      },
      py::arg("success"), py::arg("flip"), py::arg("loss"), py::arg("p_t"),
      "Heralded R,A state and its heralding probability.");

  m.def(
      "negativity", [](const Matrix& rho) { return negativity(two_qubit(rho)); }, py::arg("rho"));
  m.def(
      "is_entangled", [](const Matrix& rho, double tol) { return is_entangled(two_qubit(rho), tol); },
      py::arg("rho"), py::arg("tol") = kEntanglementTol);
  m.def(
      "pt_spectrum", [](const Matrix& rho) { return pt_spectrum(two_qubit(rho)); }, py::arg("rho"));
  m.def(
      "fidelity", [](const Matrix& a, const Matrix& b) { return fidelity(DensityMatrix(a), DensityMatrix(b)); },
      py::arg("rho"), py::arg("sigma"));

  m.def(
      "simulate",
      [](double singlet_rate, double singles, double noise, double window, double duration, std::uint64_t seed,
         double noise_excited, unsigned shards, unsigned workers) {
        CoincidenceTally t;
        {
          py::gil_scoped_release release;
          t = simulate_sharded(rates(singlet_rate, singles, noise, window, noise_excited), duration, seed, shards,
                               workers);
        }
        return tally_dict(t);
      },
      py::arg("rate_singlet"), py::arg("rate_singles"), py::arg("rate_noise"), py::arg("window"),
      py::arg("duration"), py::arg("seed") = 0, py::arg("noise_excited") = 0.0, py::arg("shards") = 1,
      py::arg("workers") = 1);
  m.def(
      "rate_ratio",
      [](double singlet_rate, double singles, double noise, double window) {
        return rate_ratio(rates(singlet_rate, singles, noise, window, 0.0));
      },
      py::arg("rate_singlet"), py::arg("rate_singles"), py::arg("rate_noise"), py::arg("window"));

  m.def(
      "born_probabilities",
      [](const Matrix& rho) {
        const auto p = born_probabilities(two_qubit(rho));
        return std::vector<double>(p.begin(), p.end());
      },
      py::arg("rho"));
  m.def(
      "tomography",
      [](const Matrix& rho, std::uint64_t shots, std::uint64_t seed, const std::string& noise) {
        TomographySettings s;
        s.shots_per_setting = shots;
        s.seed = seed;
        if (noise == "poisson") {
          s.noise_model = CountNoise::poisson;
        } else if (noise != "multinomial") {
          throw py::value_error("noise must be 'multinomial' or 'poisson'");
        }
        return reconstruct(sample_counts(born_probabilities(two_qubit(rho)), s)).data();
      },
      py::arg("rho"), py::arg("shots") = 1000000, py::arg("seed") = 0, py::arg("noise") = "multinomial",
      "Simulated 36-setting tomography followed by reconstruction.");

  m.def(
      "run",
      [](const std::string& command, const std::string& config, std::uint64_t seed, const std::string& format) {
        auto rc = cli::make_run_config(cli::parse_command(command), cli::Config::parse_string(config),
                                       {seed, std::nullopt, format});
        std::ostringstream out;
        std::ostringstream log;
        cli::run_to_stream(rc, out, log);
        return out.str();
      },
      py::arg("command"), py::arg("config"), py::arg("seed") = 0, py::arg("format") = "csv",
      "Runs a CLI command on configuration text and returns the table.");
}
