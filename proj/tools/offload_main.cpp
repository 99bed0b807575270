// offload: solve, simulate, dump policy maps and check structural properties
// for deadline-aware Wi-Fi offloading scenarios.
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 a property
// check failed, 1 anything else.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11/CLI11.hpp>

#include "offload/config.hpp"
#include "offload/dp_general.hpp"
#include "offload/dp_monotone.hpp"
#include "offload/errors.hpp"
#include "offload/io.hpp"
#include "offload/sim.hpp"
#include "offload/verify.hpp"

namespace {

using namespace offload;

constexpr int kExitValidation = 2;
constexpr int kExitPropertyFailure = 3;

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;

    ScenarioConfig load() const {
        ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : parse_config_file(config_path);
        if (seed) cfg.seed = *seed;
        if (runs) cfg.runs = *runs;
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--config", c.config_path, "Scenario file (key = value); defaults apply when omitted");
    cmd.add_option("--seed", c.seed, "Override the scenario seed");
}

// The instance used by single-instance commands: run 0 of the experiment streams.
Instance first_instance(const ScenarioConfig& cfg) {
    Rng rng = make_stream(cfg.seed, {0, 0});
    Instance inst = sample_instance(cfg, rng);
    if (inst.warning) std::cerr << "warning: " << *inst.warning << '\n';
    return inst;
}

MonotoneModel structured_model(const Instance& inst, bool approximate) {
    return MonotoneModel::from_network(inst.model, approximate);
}

std::string to_text(auto&& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

int cmd_solve(const Common& common, const std::string& solver, const std::string& out, bool approximate) {
    const ScenarioConfig cfg = common.load();
    const Instance inst = first_instance(cfg);
    const LocationId l1 = inst.spec.initial_location();
    std::filesystem::path dir(out);
    if (!out.empty() && out != "-") std::filesystem::create_directories(dir);
    const bool to_stdout = out.empty() || out == "-";

    if (solver == "general") {
        const Solution sol = solve(inst.model, inst.spec, SolveOptions{cfg.cost_model});
        std::cerr << "v_1(K, l1=" << l1.value << ") = " << sol.values.at(1, inst.spec.steps(), l1) << '\n';
        if (to_stdout) {
            write_output("-", to_text([&](std::ostream& os) { write_policy_csv(os, sol.policy); }));
        } else {
            write_output((dir / "policy.csv").string(), to_text([&](std::ostream& os) { write_policy_csv(os, sol.policy); }));
            write_output((dir / "values.csv").string(), to_text([&](std::ostream& os) { write_values_csv(os, sol.values); }));
        }
        return 0;
    }
    const MonotoneSolution sol = solve_monotone(structured_model(inst, approximate), inst.spec);
    std::cerr << "v_1(K, l1=" << l1.value << ") = " << sol.values.at(1, inst.spec.steps(), l1) << '\n';
    if (to_stdout) {
        write_output("-", to_text([&](std::ostream& os) { write_thresholds_csv(os, sol.thresholds); }));
    } else {
        write_output((dir / "thresholds.csv").string(),
                     to_text([&](std::ostream& os) { write_thresholds_csv(os, sol.thresholds); }));
        write_output((dir / "values.csv").string(), to_text([&](std::ostream& os) { write_values_csv(os, sol.values); }));
    }
    return 0;
}

int cmd_policy_map(const Common& common, const std::string& solver, int location, const std::string& out,
                   bool approximate) {
    const ScenarioConfig cfg = common.load();
    const Instance inst = first_instance(cfg);
    const LocationId l{location};
    inst.model.checked(l);
    PolicyMap map;
    if (solver == "general") {
        map = policy_map(solve(inst.model, inst.spec, SolveOptions{cfg.cost_model}).policy, l);
    } else {
        map = policy_map(solve_monotone(structured_model(inst, approximate), inst.spec).thresholds, l);
    }
    write_output(out, to_text([&](std::ostream& os) { write_policy_map_csv(os, map); }));
    return 0;
}

Sweep parse_sweep(const std::string& text) {
    Sweep sweep;
    if (text.empty()) return sweep;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ValidationError("--sweep expects axis=v1,v2,...; got '" + text + "'");
    const auto axis = parse_sweep_axis(text.substr(0, eq));
    if (!axis) throw ValidationError("unknown sweep axis '" + text.substr(0, eq) + "' (deadline, mu_w, file, p_stay)");
    sweep.axis = *axis;
    std::stringstream values(text.substr(eq + 1));
    for (std::string item; std::getline(values, item, ',');) {
        try {
            std::size_t used = 0;
            sweep.values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("bad sweep value '" + item + "'");
        }
    }
    if (sweep.values.empty()) throw ValidationError("--sweep needs at least one value");
    return sweep;
}

std::vector<SchemeKind> parse_schemes(const std::vector<std::string>& names) {
    std::vector<SchemeKind> out;
    for (const auto& n : names) {
        if (n == "all") {
            out.assign(kAllSchemes.begin(), kAllSchemes.end());
            continue;
        }
        const auto s = parse_scheme(n);
        if (!s) throw ValidationError("unknown scheme '" + n + "' (general, monotone, no-offload, otso, wiffler, all)");
        out.push_back(*s);
    }
    if (out.empty()) out.assign(kAllSchemes.begin(), kAllSchemes.end());
    return out;
}

int cmd_simulate(const Common& common, const std::vector<std::string>& scheme_names, const std::string& sweep_text,
                 const std::string& out, const std::string& json_out, int jobs) {
    const ScenarioConfig cfg = common.load();
    const auto schemes = parse_schemes(scheme_names);
    const ExperimentResult result = run_experiment(cfg, schemes, parse_sweep(sweep_text), jobs);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    write_output(out, to_text([&](std::ostream& os) { write_experiment_csv(os, result); }));
    if (!json_out.empty()) write_output(json_out, experiment_json(result).dump(2) + "\n");
    return 0;
}

int cmd_verify(const Common& common, const std::vector<std::string>& names) {
    const ScenarioConfig cfg = common.load();
    std::vector<Property> props;
    for (const auto& n : names) {
        if (n == "all") {
            props.assign(kAllProperties.begin(), kAllProperties.end());
            continue;
        }
        const auto p = parse_property(n);
        if (!p) throw ValidationError("unknown property '" + n + "'");
        props.push_back(*p);
    }
    if (props.empty()) props.assign(kAllProperties.begin(), kAllProperties.end());

    const Instance inst = first_instance(cfg);
    const Solution sol = solve(inst.model, inst.spec, SolveOptions{cfg.cost_model});
    VerifyOptions opt;
    opt.cost = cfg.cost_model;
    opt.seed = cfg.seed;
    bool failed = false;
    for (const auto& r : verify(inst.model, inst.spec, sol, props, opt)) {
        std::cout << to_string(r.property) << ": " << to_string(r.status);
        if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
        std::cout << '\n';
        failed = failed || r.status == CheckStatus::Fail;
    }
    return failed ? kExitPropertyFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deadline-aware Wi-Fi offloading: planning, simulation and policy inspection"};
    app.require_subcommand(1);

    Common common;
    std::string solver = "general";
    std::string out;
    bool approximate = false;

    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance; write policy/thresholds and values");
    add_common(*solve_cmd, common);
    solve_cmd->add_option("--solver", solver, "general | monotone")->check(CLI::IsMember({"general", "monotone"}));
    solve_cmd->add_option("--out", out, "Output directory ('-' or omitted: policy or thresholds to stdout)");
    solve_cmd->add_flag("--approximate", approximate, "Monotone solver: average rates and prices instead of rejecting");

    std::vector<std::string> schemes;
    std::string sweep;
    std::string json_out;
    int jobs = 1;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo comparison of schemes, optionally over a sweep");
    add_common(*sim_cmd, common);
    sim_cmd->add_option("--runs", common.runs, "Override the number of runs per sweep point");
    sim_cmd->add_option("--schemes", schemes, "general, monotone, no-offload, otso, wiffler or all")->delimiter(',');
    sim_cmd->add_option("--sweep", sweep, "axis=v1,v2,... with axis in deadline, mu_w, file, p_stay");
    sim_cmd->add_option("--out", out, "CSV output path ('-' or omitted: stdout)");
    sim_cmd->add_option("--json", json_out, "Also write the results and full config as JSON");
    sim_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    int location = 1;
    auto* map_cmd = app.add_subcommand("policy-map", "T x (K/sigma+1) action-code matrix for one location");
    add_common(*map_cmd, common);
    map_cmd->add_option("--solver", solver, "general | monotone")->check(CLI::IsMember({"general", "monotone"}));
    map_cmd->add_option("--location", location, "1-based location id");
    map_cmd->add_option("--out", out, "CSV output path ('-' or omitted: stdout)");
    map_cmd->add_flag("--approximate", approximate, "Monotone solver: average rates and prices instead of rejecting");

    std::vector<std::string> properties;
    auto* verify_cmd = app.add_subcommand("verify", "Check structural properties on the solved instance");
    add_common(*verify_cmd, common);
    verify_cmd->add_option("--properties", properties, "Comma list of property names, or all")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*solve_cmd) return cmd_solve(common, solver, out, approximate);
        if (*sim_cmd) return cmd_simulate(common, schemes, sweep, out, json_out, jobs);
        if (*map_cmd) return cmd_policy_map(common, solver, location, out, approximate);
        if (*verify_cmd) return cmd_verify(common, properties);
    } catch (const ParseError& e) {
        std::cerr << "error: config key '" << e.key() << "': " << e.what() << '\n';
        return kExitValidation;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << " [" << e.clause() << "]\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
