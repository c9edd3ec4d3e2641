#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "semadapt/cli.hpp"
#include "semadapt/harness.hpp"

namespace py = pybind11;
using namespace semadapt;

namespace {

// JSON values cross the boundary as text and are decoded with the json module.
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::object& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

Config config_from(const py::object& obj) {
  if (obj.is_none()) return Config{};
  if (py::isinstance<py::str>(obj)) return load_config(obj.cast<std::string>());
  return parse_config(from_python(obj));
}

py::dict step_dict(const StepResult& r) {
  py::dict d;
  d["observation"] = r.observation;
  d["reward"] = r.reward;
  d["ric_time_ms"] = r.costs.ric_time_ms;
  d["overshoot_ms"] = r.costs.overshoot_ms;
  d["air_overhead_ms"] = r.info.air_overhead_ms;
  d["mean_utility"] = r.info.mean_utility;
  d["t_avail_ms"] = r.info.t_avail_ms;
  d["deadline_hit"] = r.info.deadline_hit;
  d["adaptations"] = r.info.adaptations;
  d["hits"] = r.info.hits;
  d["done"] = r.done;
  return d;
}

}  // namespace

PYBIND11_MODULE(_semadapt, m) {
  m.doc() = "Latency-aware semantic adaptation simulator with constrained PPO";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Primitive>(m, "Primitive")
      .value("FullRetrain", Primitive::FullRetrain)
      .value("FeatRefine", Primitive::FeatRefine)
      .value("LightAdapt", Primitive::LightAdapt)
      .value("DeployCached", Primitive::DeployCached)
      .value("NoOp", Primitive::NoOp);

  py::enum_<PredictorMode>(m, "PredictorMode")
      .value("Nominal", PredictorMode::Nominal)
      .value("Bounded", PredictorMode::Bounded)
      .value("Oracle", PredictorMode::Oracle);

  py::class_<Action>(m, "Action")
      .def(py::init([](Primitive p, std::vector<bool> mask) { return Action{p, std::move(mask)}; }),
           py::arg("primitive"), py::arg("mask"))
      .def_readwrite("primitive", &Action::primitive)
      .def_readwrite("mask", &Action::mask)
      .def_static("noop", &Action::noop, py::arg("n_ues"))
      .def("__eq__", [](const Action& a, const Action& b) { return a == b; })
      .def("__repr__", [](const Action& a) {
        std::string s = "Action(" + std::string(to_string(a.primitive)) + ", ";
        for (bool b : a.mask) s += b ? '1' : '0';
        return s + ")";
      });

  py::class_<LatencyComponents>(m, "LatencyComponents")
      .def_readonly("fb_ms", &LatencyComponents::fb_ms)
      .def_readonly("ric_ms", &LatencyComponents::ric_ms)
      .def_readonly("tx_ms", &LatencyComponents::tx_ms)
      .def_readonly("reconf_ms", &LatencyComponents::reconf_ms)
      .def_readonly("total_ms", &LatencyComponents::total_ms);

  m.def("slot_timing", [](int mu) {
    const SlotTiming t = slot_timing(mu);
    return py::make_tuple(t.slot_ms, t.symbol_ms);
  }, py::arg("mu"), "(slot_ms, symbol_ms) for numerology mu");
  m.def("available_window", [](int grants, int symbols, double control_ms, int mu) {
    return available_window({grants, symbols, control_ms}, slot_timing(mu));
  }, py::arg("grants"), py::arg("symbols"), py::arg("control_ms"), py::arg("mu"));
  m.def("nominal_latency", [](Primitive p) { return nominal_latency(p); }, py::arg("primitive"));
  m.def("slack_and_debt", [](double total, double deadline) {
    const SlackDebt sd = slack_and_debt(total, deadline);
    return py::make_tuple(sd.slack_ms, sd.debt);
  }, py::arg("total_ms"), py::arg("deadline_ms"));

  py::class_<Environment>(m, "Environment")
      .def(py::init([](const py::object& cfg) { return Environment(config_from(cfg).env); }),
           py::arg("config") = py::none(), "config: path, dict, or None for defaults")
      .def("reset", &Environment::reset, py::arg("seed"))
      .def("step", [](Environment& e, const Action& a) { return step_dict(e.step(a)); }, py::arg("action"))
      .def("observation", &Environment::observation)
      .def_property_readonly("frame", &Environment::frame)
      .def_property_readonly("done", &Environment::done)
      .def_property_readonly("n_ues", [](const Environment& e) { return e.config().n_ues; })
      .def_property_readonly("t_avail_ms", [](const Environment& e) { return e.radio().t_avail_ms; })
      .def("shield", [](const Environment& e, const Action& a, bool reversed, PredictorMode mode) {
        ShieldConfig sc;
        sc.predictor = mode;
        if (reversed) sc.fallback_order = ShieldConfig::reversed_order();
        const Projection p = project(FeasibilityContext::from_environment(e, mode), a, sc);
        return py::make_tuple(p.action, p.report.limit_drops, p.report.budget_drops,
                              p.report.fallbacks);
      }, py::arg("action"), py::arg("reversed") = false, py::arg("predictor") = PredictorMode::Bounded,
         "Project an action onto the current frame's feasible set.")
      .def("is_feasible", [](const Environment& e, const Action& a, PredictorMode mode) {
        return is_feasible(FeasibilityContext::from_environment(e, mode), a);
      }, py::arg("action"), py::arg("predictor") = PredictorMode::Bounded);

  m.def("gae", [](std::vector<double> values, std::vector<double> signals, double gamma, double lam) {
    const GaeResult g = gae(values, signals, gamma, lam);
    return py::make_tuple(g.advantages, g.returns);
  }, py::arg("values"), py::arg("signals"), py::arg("gamma"), py::arg("lambda_gae"));

  m.def("dual_update", [](std::array<double, 2> lambda, std::array<double, 2> means,
                          std::array<double, 2> budgets, double step, double ema) {
    const DualState d = dual_update(DualState{lambda, ema, step}, means[0], means[1], budgets[0], budgets[1]);
    return d.lambda;
  }, py::arg("lambda_"), py::arg("means"), py::arg("budgets"), py::arg("step") = 1e-3,
     py::arg("ema") = 0.9);

  m.def("default_config", [] { return to_python(to_json(Config{})); });
  m.def("validate_config", [](const py::object& cfg) { return to_python(to_json(config_from(cfg))); },
        py::arg("config"), "Parse and range-check; returns the normalized config.");
  m.def("config_hash", [](const py::object& cfg) { return config_hash(config_from(cfg)); },
        py::arg("config"));

  m.def("run", [](const py::object& cfg, const std::filesystem::path& out, bool ablate) {
    const Config c = config_from(cfg);
    nlohmann::json manifest;
    {
      py::gil_scoped_release release;
      manifest = run_tasks(c, ablate ? plan_ablation(c) : plan_run(c), out);
    }
    return to_python(manifest);
  }, py::arg("config"), py::arg("out"), py::arg("ablate") = false,
     "Train and evaluate every (agent, seed); returns the manifest.");

  m.def("summarize", [](const std::filesystem::path& dir) {
    const SummaryReport r = summarize(dir);
    return to_python(r.summary);
  }, py::arg("dir"));

  m.def("cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run the command-line interface; returns (exit_code, stdout, stderr).");
}
