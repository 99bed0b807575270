#include "offload/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "offload/errors.hpp"

namespace offload {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

PolicyMap policy_map(const Policy& policy, LocationId l) {
    PolicyMap map(policy.horizon(), std::vector<int>(policy.steps() + 1));
    for (int t = 1; t <= policy.horizon(); ++t)
        for (int k = 0; k <= policy.steps(); ++k) map[t - 1][k] = code(policy.at(t, k, l));
    return map;
}

PolicyMap policy_map(const ThresholdPolicy& thresholds, LocationId l) {
    PolicyMap map(thresholds.horizon(), std::vector<int>(thresholds.steps() + 1));
    for (int t = 1; t <= thresholds.horizon(); ++t)
        for (int k = 0; k <= thresholds.steps(); ++k) map[t - 1][k] = code(decide(thresholds, State{k, l}, t));
    return map;
}

int switches_along_k(const PolicyMap& map, int t) {
    const auto& row = map.at(t - 1);
    int n = 0;
    for (std::size_t k = 2; k < row.size(); ++k) n += row[k] != row[k - 1];
    return n;
}

void write_policy_csv(std::ostream& os, const Policy& policy) {
    os << "t,k,l,action\n";
    for (int t = 1; t <= policy.horizon(); ++t)
        for (int k = 0; k <= policy.steps(); ++k)
            for (int l = 1; l <= policy.locations(); ++l)
                os << t << ',' << k << ',' << l << ',' << code(policy.at(t, k, LocationId{l})) << '\n';
}

void write_values_csv(std::ostream& os, const ValueTable& values) {
    os << "t,k,l,value\n";
    for (int t = 1; t <= values.horizon() + 1; ++t)
        for (int k = 0; k <= values.steps(); ++k)
            for (int l = 1; l <= values.locations(); ++l)
                os << t << ',' << k << ',' << l << ',' << num(values.at(t, k, LocationId{l})) << '\n';
}

void write_thresholds_csv(std::ostream& os, const ThresholdPolicy& thresholds) {
    os << "l,t,k_star\n";
    for (int l = 1; l <= thresholds.locations(); ++l)
        for (int t = 1; t <= thresholds.horizon(); ++t) {
            const int k = thresholds.k_star(LocationId{l}, t);
            os << l << ',' << t << ',';
            if (k >= thresholds.infinity()) os << "inf";
            else os << k;
            os << '\n';
        }
}

void write_policy_map_csv(std::ostream& os, const PolicyMap& map) {
    os << 't';
    const std::size_t cols = map.empty() ? 0 : map.front().size();
    for (std::size_t k = 0; k < cols; ++k) os << ',' << k;
    os << '\n';
    for (std::size_t t = 0; t < map.size(); ++t) {
        os << t + 1;
        for (int a : map[t]) os << ',' << a;
        os << '\n';
    }
}

void write_experiment_csv(std::ostream& os, const ExperimentResult& result) {
    os << "sweep_value,scheme,completion_prob,completion_ci,mean_cost,cost_ci,mean_payment,payment_ci,"
          "slots_cellular,slots_wifi,slots_waiting\n";
    for (const auto& r : result.rows) {
        const auto& m = r.metrics;
        os << num(r.sweep_value) << ',' << to_string(r.scheme) << ',' << num(m.completion.mean) << ','
           << num(m.completion.half_width) << ',' << num(m.total_cost.mean) << ',' << num(m.total_cost.half_width)
           << ',' << num(m.payment.mean) << ',' << num(m.payment.half_width) << ',' << num(m.slots_cellular) << ','
           << num(m.slots_wifi) << ',' << num(m.slots_waiting) << '\n';
    }
}

nlohmann::json experiment_json(const ExperimentResult& result) {
    nlohmann::json config = nlohmann::json::object();
    std::istringstream lines(serialize(result.config));
    for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find('=');
        if (line.empty() || line.front() == '#' || eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(' ');
            const auto e = s.find_last_not_of(' ');
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        config[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        const auto& m = r.metrics;
        rows.push_back({
            {"sweep_value", r.sweep_value},
            {"scheme", std::string(to_string(r.scheme))},
            {"runs", m.runs},
            {"completion_prob", m.completion.mean},
            {"completion_ci", m.completion.half_width},
            {"mean_cost", m.total_cost.mean},
            {"cost_ci", m.total_cost.half_width},
            {"mean_payment", m.payment.mean},
            {"payment_ci", m.payment.half_width},
            {"slots_cellular", m.slots_cellular},
            {"slots_wifi", m.slots_wifi},
            {"slots_waiting", m.slots_waiting},
        });
    }
    return {
        {"config", config},
        {"sweep_axis", std::string(to_string(result.axis))},
        {"seed", result.config.seed},
        {"runs", result.config.runs},
        {"run_model",
         {{"initial_location", result.config.initial_location ? "fixed" : "uniform"},
          {"rates", "drawn once per run, constant over the horizon"},
          {"instance", "resampled every run"}}},
        {"warnings", result.warnings},
        {"rows", rows},
    };
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw ValidationError("failed writing " + path);
}

}  // namespace offload
