#include "offload/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace offload {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ParseError(key, "config key '" + key + "': expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

template <class Int>
Int parse_int(const std::string& key, std::string_view v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ParseError(key, "config key '" + key + "': expected an integer, got '" + std::string(v) + "'");
    }
    return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = v.find(',');
        const auto item = trim(v.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& key, std::string_view v) {
    std::vector<double> out;
    for (auto item : split_list(v)) out.push_back(parse_double(key, item));
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class Range, class Fn>
std::string join(const Range& values, Fn&& fmt) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) out += ",";
        out += fmt(v);
    }
    return out;
}

struct PenaltyFields {
    std::string kind = "quadratic";
    double b = 1.0;
    double z = 100000.0;
    std::vector<double> values;
};

using Setter = std::function<void(ScenarioConfig&, PenaltyFields&, const std::string&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"grid_rows", [](auto& c, auto&, const auto& k, auto v) { c.grid_rows = parse_int<int>(k, v); }},
        {"grid_cols", [](auto& c, auto&, const auto& k, auto v) { c.grid_cols = parse_int<int>(k, v); }},
        {"p_stay", [](auto& c, auto&, const auto& k, auto v) { c.p_stay = parse_double(k, v); }},
        {"wifi_prob", [](auto& c, auto&, const auto& k, auto v) { c.wifi_prob = parse_double(k, v); }},
        {"mu_c_mbps", [](auto& c, auto&, const auto& k, auto v) { c.mu_c_mbps = parse_double(k, v); }},
        {"mu_w_mbps", [](auto& c, auto&, const auto& k, auto v) { c.mu_w_mbps = parse_double(k, v); }},
        {"rate_std_mbps", [](auto& c, auto&, const auto& k, auto v) { c.rate_std_mbps = parse_double(k, v); }},
        {"price_per_gbyte", [](auto& c, auto&, const auto& k, auto v) { c.price_per_gbyte = parse_double(k, v); }},
        {"file_mbytes", [](auto& c, auto&, const auto& k, auto v) { c.file_mbytes = parse_double(k, v); }},
        {"deadline_min", [](auto& c, auto&, const auto& k, auto v) { c.deadline_min = parse_double(k, v); }},
        {"slot_seconds", [](auto& c, auto&, const auto& k, auto v) { c.slot_seconds = parse_double(k, v); }},
        {"sigma_mbit", [](auto& c, auto&, const auto& k, auto v) { c.sigma_mbit = parse_double(k, v); }},
        {"penalty",
         [](auto&, auto& p, const auto& k, auto v) {
             if (v != "quadratic" && v != "step" && v != "tabulated") {
                 throw ParseError(k, "config key 'penalty': expected quadratic, step or tabulated");
             }
             p.kind = std::string(v);
         }},
        {"penalty_b", [](auto&, auto& p, const auto& k, auto v) { p.b = parse_double(k, v); }},
        {"penalty_z", [](auto&, auto& p, const auto& k, auto v) { p.z = parse_double(k, v); }},
        {"penalty_values", [](auto&, auto& p, const auto& k, auto v) { p.values = parse_double_list(k, v); }},
        {"cost_model",
         [](auto& c, auto&, const auto& k, auto v) {
             if (v == "usage") c.cost_model = CostModel::Usage;
             else if (v == "flat") c.cost_model = CostModel::Flat;
             else throw ParseError(k, "config key 'cost_model': expected usage or flat");
         }},
        {"runs", [](auto& c, auto&, const auto& k, auto v) { c.runs = parse_int<int>(k, v); }},
        {"seed", [](auto& c, auto&, const auto& k, auto v) { c.seed = parse_int<std::uint64_t>(k, v); }},
        {"wiffler_theta", [](auto& c, auto&, const auto& k, auto v) { c.wiffler_theta = parse_double(k, v); }},
        {"wiffler_window", [](auto& c, auto&, const auto& k, auto v) { c.wiffler_window = parse_int<int>(k, v); }},
        {"horizon_slots", [](auto& c, auto&, const auto& k, auto v) { c.horizon_slots = parse_int<int>(k, v); }},
        {"wifi_locations",
         [](auto& c, auto&, const auto& k, auto v) {
             std::vector<LocationId> ids;
             if (v != "none")
                 for (auto item : split_list(v)) ids.push_back(LocationId{parse_int<int>(k, item)});
             c.wifi_locations = std::move(ids);
         }},
        {"cellular_rates_mbps",
         [](auto& c, auto&, const auto& k, auto v) { c.cellular_rates_mbps = parse_double_list(k, v); }},
        {"wifi_rates_mbps", [](auto& c, auto&, const auto& k, auto v) { c.wifi_rates_mbps = parse_double_list(k, v); }},
        {"initial_location",
         [](auto& c, auto&, const auto& k, auto v) { c.initial_location = LocationId{parse_int<int>(k, v)}; }},
    };
    return table;
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

int ScenarioConfig::horizon() const {
    if (horizon_slots) return *horizon_slots;
    const double t = 60.0 * deadline_min / slot_seconds;
    return static_cast<int>(std::llround(t));
}

void ScenarioConfig::validate() const {
    check(grid_rows >= 1 && grid_cols >= 1, "grid_rows and grid_cols must be >= 1");
    check(is_probability(p_stay), "p_stay must lie in [0, 1]");
    check(is_probability(wifi_prob), "wifi_prob must lie in [0, 1]");
    check(mu_c_mbps >= 0.0 && mu_w_mbps >= 0.0, "mean rates must be >= 0");
    check(rate_std_mbps >= 0.0, "rate_std_mbps must be >= 0");
    check(price_per_gbyte >= 0.0, "price_per_gbyte must be >= 0");
    check(file_mbytes >= 0.0, "file_mbytes must be >= 0");
    check(slot_seconds > 0.0, "slot_seconds must be > 0");
    check(sigma_mbit > 0.0, "sigma_mbit must be > 0");
    check(runs >= 1, "runs must be >= 1");
    check(wiffler_theta > 0.0, "wiffler_theta must be > 0");
    check(wiffler_window >= 1, "wiffler_window must be >= 1");
    if (horizon_slots) {
        check(*horizon_slots >= 1, "horizon_slots must be >= 1");
    } else {
        check(deadline_min > 0.0, "deadline_min must be > 0");
        const double t = 60.0 * deadline_min / slot_seconds;
        check(std::abs(t - std::round(t)) <= 1e-9 * std::max(1.0, t),
              "60 * deadline_min / slot_seconds must be a whole number of slots (got " + format_double(t) + ")");
        check(std::round(t) >= 1.0, "deadline shorter than one slot");
    }
    const int n = locations();
    if (wifi_locations) {
        std::set<int> seen;
        for (LocationId l : *wifi_locations) {
            check(l.value >= 1 && l.value <= n, "wifi_locations: id " + std::to_string(l.value) + " out of range");
            check(seen.insert(l.value).second, "wifi_locations: duplicate id " + std::to_string(l.value));
        }
    }
    for (const auto* list : {&cellular_rates_mbps, &wifi_rates_mbps}) {
        if (*list) {
            check(static_cast<int>((*list)->size()) == n, "per-location rate lists need one entry per location");
            for (double r : **list) check(r >= 0.0, "per-location rates must be >= 0");
        }
    }
    if (initial_location) {
        check(initial_location->value >= 1 && initial_location->value <= n, "initial_location out of range");
    }
    if (const auto* q = std::get_if<QuadraticPenalty>(&penalty.variant())) check(q->b >= 0.0, "penalty_b must be >= 0");
    if (const auto* s = std::get_if<StepPenalty>(&penalty.variant())) check(s->z >= 0.0, "penalty_z must be >= 0");
    if (const auto* tab = std::get_if<TabulatedPenalty>(&penalty.variant())) {
        check(!tab->values.empty() && tab->values.front() == 0.0, "penalty_values must start with 0");
        for (std::size_t i = 1; i < tab->values.size(); ++i) {
            check(tab->values[i] >= tab->values[i - 1], "penalty_values must be non-decreasing");
        }
    }
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    PenaltyFields pen;
    std::set<std::string> seen;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("", "config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError(key, "unknown config key '" + key + "'");
        if (!seen.insert(key).second) throw ParseError(key, "duplicate config key '" + key + "'");
        if (value.empty()) throw ParseError(key, "config key '" + key + "' has no value");
        it->second(cfg, pen, key, value);
    }
    if (pen.kind == "quadratic") cfg.penalty = QuadraticPenalty{pen.b};
    else if (pen.kind == "step") cfg.penalty = StepPenalty{pen.z};
    else {
        if (pen.values.empty()) throw ParseError("penalty_values", "tabulated penalty needs penalty_values");
        cfg.penalty = TabulatedPenalty{pen.values};
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize(const ScenarioConfig& c) {
    std::ostringstream os;
    auto kv = [&](const char* key, const std::string& value) { os << key << " = " << value << "\n"; };
    kv("grid_rows", std::to_string(c.grid_rows));
    kv("grid_cols", std::to_string(c.grid_cols));
    kv("p_stay", format_double(c.p_stay));
    kv("wifi_prob", format_double(c.wifi_prob));
    kv("mu_c_mbps", format_double(c.mu_c_mbps));
    kv("mu_w_mbps", format_double(c.mu_w_mbps));
    kv("rate_std_mbps", format_double(c.rate_std_mbps));
    kv("price_per_gbyte", format_double(c.price_per_gbyte));
    kv("file_mbytes", format_double(c.file_mbytes));
    kv("deadline_min", format_double(c.deadline_min));
    kv("slot_seconds", format_double(c.slot_seconds));
    kv("sigma_mbit", format_double(c.sigma_mbit));
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, QuadraticPenalty>) {
                kv("penalty", "quadratic");
                kv("penalty_b", format_double(p.b));
            } else if constexpr (std::is_same_v<T, StepPenalty>) {
                kv("penalty", "step");
                kv("penalty_z", format_double(p.z));
            } else {
                kv("penalty", "tabulated");
                kv("penalty_values", join(p.values, format_double));
            }
        },
        c.penalty.variant());
    kv("cost_model", std::string(to_string(c.cost_model)));
    kv("runs", std::to_string(c.runs));
    kv("seed", std::to_string(c.seed));
    kv("wiffler_theta", format_double(c.wiffler_theta));
    kv("wiffler_window", std::to_string(c.wiffler_window));
    if (c.horizon_slots) kv("horizon_slots", std::to_string(*c.horizon_slots));
    if (c.wifi_locations) {
        kv("wifi_locations", c.wifi_locations->empty()
                                 ? std::string("none")
                                 : join(*c.wifi_locations, [](LocationId l) { return std::to_string(l.value); }));
    }
    if (c.cellular_rates_mbps) kv("cellular_rates_mbps", join(*c.cellular_rates_mbps, format_double));
    if (c.wifi_rates_mbps) kv("wifi_rates_mbps", join(*c.wifi_rates_mbps, format_double));
    if (c.initial_location) kv("initial_location", std::to_string(c.initial_location->value));
    return os.str();
}

}  // namespace offload
