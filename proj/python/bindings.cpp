#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "offload/config.hpp"
#include "offload/dp_general.hpp"
#include "offload/dp_monotone.hpp"
#include "offload/io.hpp"
#include "offload/oracle.hpp"
#include "offload/sim.hpp"
#include "offload/verify.hpp"

namespace py = pybind11;
using namespace offload;

namespace {

CostModel parse_cost(const std::string& name) {
    if (name == "usage") return CostModel::Usage;
    if (name == "flat") return CostModel::Flat;
    throw DomainError("cost must be 'usage' or 'flat', got '" + name + "'");
}

std::vector<Property> parse_properties(const std::vector<std::string>& names) {
    if (names.empty()) return {kAllProperties.begin(), kAllProperties.end()};
    std::vector<Property> out;
    for (const auto& n : names) {
        const auto p = parse_property(n);
        if (!p) throw DomainError("unknown property '" + n + "'");
        out.push_back(*p);
    }
    return out;
}

std::vector<SchemeKind> parse_schemes(const std::vector<std::string>& names) {
    if (names.empty()) return {kAllSchemes.begin(), kAllSchemes.end()};
    std::vector<SchemeKind> out;
    for (const auto& n : names) {
        const auto s = parse_scheme(n);
        if (!s) throw DomainError("unknown scheme '" + n + "'");
        out.push_back(*s);
    }
    return out;
}

Instance instance_for_run(const ScenarioConfig& cfg, std::uint64_t run) {
    Rng rng = make_stream(cfg.seed, {run, 0});
    return sample_instance(cfg, rng);
}

py::dict metrics_dict(const ExperimentRow& r) {
    const auto& m = r.metrics;
    py::dict d;
    d["sweep_value"] = r.sweep_value;
    d["scheme"] = std::string(to_string(r.scheme));
    d["runs"] = m.runs;
    d["completion_prob"] = m.completion.mean;
    d["completion_ci"] = m.completion.half_width;
    d["mean_cost"] = m.total_cost.mean;
    d["cost_ci"] = m.total_cost.half_width;
    d["mean_payment"] = m.payment.mean;
    d["payment_ci"] = m.payment.half_width;
    d["slots_cellular"] = m.slots_cellular;
    d["slots_wifi"] = m.slots_wifi;
    d["slots_waiting"] = m.slots_waiting;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Delay-aware Wi-Fi offloading: finite-horizon solvers, baselines and Monte-Carlo experiments.";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

    py::enum_<Action>(m, "Action")
        .value("IDLE", Action::Idle)
        .value("CELLULAR", Action::Cellular)
        .value("WIFI", Action::WiFi);

    py::class_<ScenarioConfig>(m, "Config")
        .def(py::init<>())
        .def_static("from_text", &parse_config, py::arg("text"))
        .def_static("from_file", &parse_config_file, py::arg("path"))
        .def("to_text", &serialize)
        .def("validate", &ScenarioConfig::validate)
        .def_property_readonly("horizon", &ScenarioConfig::horizon)
        .def_property_readonly("locations", &ScenarioConfig::locations)
        .def_readwrite("runs", &ScenarioConfig::runs)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("p_stay", &ScenarioConfig::p_stay)
        .def_readwrite("mu_c_mbps", &ScenarioConfig::mu_c_mbps)
        .def_readwrite("mu_w_mbps", &ScenarioConfig::mu_w_mbps)
        .def_readwrite("file_mbytes", &ScenarioConfig::file_mbytes)
        .def_readwrite("deadline_min", &ScenarioConfig::deadline_min)
        .def(py::self == py::self)
        .def("__repr__", [](const ScenarioConfig& c) { return "Config(\n" + serialize(c) + ")"; });

    py::class_<Instance>(m, "Instance")
        .def_property_readonly("num_locations", [](const Instance& i) { return i.model.num_locations(); })
        .def_property_readonly("steps", [](const Instance& i) { return i.spec.steps(); })
        .def_property_readonly("horizon", [](const Instance& i) { return i.spec.horizon(); })
        .def_property_readonly("sigma", [](const Instance& i) { return i.spec.sigma(); })
        .def_property_readonly("initial_location", [](const Instance& i) { return i.spec.initial_location().value; })
        .def_property_readonly("warning", [](const Instance& i) { return i.warning; })
        .def("has_wifi", [](const Instance& i, int l) { return i.model.has_wifi(LocationId{l}); })
        .def("rate", [](const Instance& i, int l, Action a) { return i.model.rate(LocationId{l}, a); });

    m.def("sample_instance", &instance_for_run, py::arg("config"), py::arg("run") = 0,
          "Instance drawn from the config's stream for the given run index.");

    py::class_<Solution>(m, "Solution")
        .def("value", [](const Solution& s, int t, int k, int l) { return s.values.at(t, k, LocationId{l}); })
        .def("action", [](const Solution& s, int t, int k, int l) { return s.policy.at(t, k, LocationId{l}); })
        .def("policy_map", [](const Solution& s, int l) { return policy_map(s.policy, LocationId{l}); });

    py::class_<MonotoneSolution>(m, "MonotoneSolution")
        .def("value", [](const MonotoneSolution& s, int t, int k, int l) { return s.values.at(t, k, LocationId{l}); })
        .def("k_star", [](const MonotoneSolution& s, int l, int t) { return s.thresholds.k_star(LocationId{l}, t); })
        .def("action",
             [](const MonotoneSolution& s, int t, int k, int l) { return decide(s.thresholds, State{k, LocationId{l}}, t); })
        .def("policy_map", [](const MonotoneSolution& s, int l) { return policy_map(s.thresholds, LocationId{l}); })
        .def_property_readonly("infinity", [](const MonotoneSolution& s) { return s.thresholds.infinity(); });

    m.def(
        "solve",
        [](const Instance& inst, const std::string& cost) {
            py::gil_scoped_release release;
            return solve(inst.model, inst.spec, SolveOptions{parse_cost(cost)});
        },
        py::arg("instance"), py::arg("cost") = "usage");

    m.def(
        "solve_monotone",
        [](const Instance& inst, bool approximate) {
            const MonotoneModel mm = MonotoneModel::from_network(inst.model, approximate);
            py::gil_scoped_release release;
            return solve_monotone(mm, inst.spec);
        },
        py::arg("instance"), py::arg("approximate") = false);

    m.def(
        "expectimax",
        [](const Instance& inst, int k, int l, int t, const std::string& cost) {
            const auto r = expectimax(inst.model, inst.spec, State{k, LocationId{l}}, t, parse_cost(cost));
            return py::make_tuple(r.optimal_value, r.optimal_actions.to_vector());
        },
        py::arg("instance"), py::arg("k"), py::arg("l"), py::arg("t") = 1, py::arg("cost") = "usage",
        "Exhaustive search; returns (value, optimal root actions).");

    m.def(
        "verify",
        [](const Instance& inst, const std::vector<std::string>& properties, const std::string& cost) {
            const CostModel c = parse_cost(cost);
            const auto props = parse_properties(properties);
            const Solution sol = solve(inst.model, inst.spec, SolveOptions{c});
            py::list out;
            for (const auto& r : verify(inst.model, inst.spec, sol, props, VerifyOptions{c})) {
                py::dict d;
                d["property"] = std::string(to_string(r.property));
                d["status"] = std::string(to_string(r.status));
                d["detail"] = r.detail;
                if (r.counterexample) {
                    d["counterexample"] = py::make_tuple(r.counterexample->t, r.counterexample->k, r.counterexample->l.value);
                } else {
                    d["counterexample"] = py::none();
                }
                out.append(d);
            }
            return out;
        },
        py::arg("instance"), py::arg("properties") = std::vector<std::string>{}, py::arg("cost") = "usage");

    m.def(
        "run_experiment",
        [](const ScenarioConfig& cfg, const std::vector<std::string>& schemes, const std::string& axis,
           const std::vector<double>& values, int jobs) {
            const auto a = parse_sweep_axis(axis);
            if (!a) throw DomainError("unknown sweep axis '" + axis + "'");
            const auto kinds = parse_schemes(schemes);
            ExperimentResult res;
            {
                py::gil_scoped_release release;
                res = run_experiment(cfg, kinds, Sweep{*a, values}, jobs);
            }
            py::list rows;
            for (const auto& r : res.rows) rows.append(metrics_dict(r));
            return rows;
        },
        py::arg("config"), py::arg("schemes") = std::vector<std::string>{}, py::arg("axis") = "deadline",
        py::arg("values") = std::vector<double>{}, py::arg("jobs") = 1);
}
