#include "offload/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace offload {

namespace {

constexpr double kRowSumTolerance = 1e-9;
// Absorbs representation error when dividing by sigma (e.g. 0.3 / 0.1).
constexpr double kGridSlack = 1e-9;

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

void check_per_location(const std::vector<double>& values, int n, const char* name) {
    require(static_cast<int>(values.size()) == n,
            std::string(name) + ": expected " + std::to_string(n) + " entries, got " +
                std::to_string(values.size()));
    for (double v : values) {
        require(std::isfinite(v) && v >= 0.0, std::string(name) + ": entries must be finite and >= 0");
    }
}

}  // namespace

std::string_view to_string(Action a) {
    switch (a) {
        case Action::Idle: return "idle";
        case Action::Cellular: return "cellular";
        case Action::WiFi: return "wifi";
    }
    return "?";
}

std::string_view to_string(CostModel c) {
    return c == CostModel::Usage ? "usage" : "flat";
}

std::vector<Action> ActionSet::to_vector() const {
    std::vector<Action> out;
    for (Action a : kAllActions) {
        if (contains(a)) out.push_back(a);
    }
    return out;
}

std::string to_string(ActionSet s) {
    std::string out = "{";
    for (Action a : s.to_vector()) {
        if (out.size() > 1) out += ",";
        out += std::to_string(code(a));
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// NetworkModel

NetworkModel::NetworkModel(Params p) : num_locations_(p.num_locations) {
    const int n = p.num_locations;
    require(n >= 1, "network model needs at least one location");
    require(p.mobility.size() == static_cast<std::size_t>(n) * n,
            "mobility matrix must be L x L (" + std::to_string(n * n) + " entries)");
    check_per_location(p.cellular_price, n, "cellular_price");
    check_per_location(p.wifi_price, n, "wifi_price");
    check_per_location(p.cellular_rate, n, "cellular_rate");
    check_per_location(p.wifi_rate, n, "wifi_rate");

    successors_.resize(n);
    for (int l = 0; l < n; ++l) {
        double sum = 0.0;
        for (int to = 0; to < n; ++to) {
            const double pr = p.mobility[static_cast<std::size_t>(l) * n + to];
            require(std::isfinite(pr) && pr >= 0.0, "mobility probabilities must be >= 0");
            sum += pr;
            if (pr > 0.0) successors_[l].push_back({to, pr});
        }
        require(std::abs(sum - 1.0) <= kRowSumTolerance,
                "mobility row " + std::to_string(l + 1) + " sums to " + std::to_string(sum));
    }

    wifi_.assign(n, 0);
    for (LocationId l : p.wifi_locations) {
        require(l.value >= 1 && l.value <= n, "wifi location " + std::to_string(l.value) + " out of range");
        wifi_[l.zero_based()] = 1;
    }

    mobility_ = std::move(p.mobility);
    cellular_price_ = std::move(p.cellular_price);
    wifi_price_ = std::move(p.wifi_price);
    cellular_rate_ = std::move(p.cellular_rate);
    wifi_rate_ = std::move(p.wifi_rate);
    // Wi-Fi parameters are meaningless where Wi-Fi is absent.
    for (int l = 0; l < n; ++l) {
        if (!wifi_[l]) {
            wifi_price_[l] = 0.0;
            wifi_rate_[l] = 0.0;
        }
    }
}

int NetworkModel::checked(LocationId l) const {
    if (l.value < 1 || l.value > num_locations_) {
        throw DomainError("location " + std::to_string(l.value) + " outside 1.." +
                          std::to_string(num_locations_));
    }
    return l.zero_based();
}

std::vector<LocationId> NetworkModel::wifi_locations() const {
    std::vector<LocationId> out;
    for (int l = 0; l < num_locations_; ++l) {
        if (wifi_[l]) out.push_back(LocationId::from_zero_based(l));
    }
    return out;
}

double NetworkModel::price(LocationId l, Action a) const {
    const int i = checked(l);
    switch (a) {
        case Action::Idle: return 0.0;
        case Action::Cellular: return cellular_price_[i];
        case Action::WiFi: return wifi_price_[i];
    }
    return 0.0;
}

double NetworkModel::rate(LocationId l, Action a) const {
    const int i = checked(l);
    switch (a) {
        case Action::Idle: return 0.0;
        case Action::Cellular: return cellular_rate_[i];
        case Action::WiFi: return wifi_rate_[i];
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// PenaltyFn

double PenaltyFn::at(int steps, double sigma) const {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, QuadraticPenalty>) {
                const double k = steps * sigma;
                return p.b * k * k;
            } else if constexpr (std::is_same_v<T, StepPenalty>) {
                return steps > 0 ? p.z : 0.0;
            } else {
                if (steps < 0 || static_cast<std::size_t>(steps) >= p.values.size()) {
                    throw DomainError("tabulated penalty has no value for grid index " + std::to_string(steps));
                }
                return p.values[steps];
            }
        },
        fn_);
}

bool PenaltyFn::valid_on_grid(int max_steps, double sigma) const {
    if (const auto* t = std::get_if<TabulatedPenalty>(&fn_)) {
        if (t->values.size() < static_cast<std::size_t>(max_steps) + 1) return false;
    }
    if (at(0, sigma) != 0.0) return false;
    double prev = 0.0;
    for (int i = 1; i <= max_steps; ++i) {
        const double h = at(i, sigma);
        if (!std::isfinite(h) || h < prev) return false;
        prev = h;
    }
    return true;
}

bool PenaltyFn::convex_on_grid(int max_steps, double sigma) const {
    for (int i = 1; i < max_steps; ++i) {
        const double left = at(i, sigma) - at(i - 1, sigma);
        const double right = at(i + 1, sigma) - at(i, sigma);
        if (right < left) return false;
    }
    return true;
}

std::string PenaltyFn::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, QuadraticPenalty>) {
                os << "quadratic(b=" << p.b << ")";
            } else if constexpr (std::is_same_v<T, StepPenalty>) {
                os << "step(z=" << p.z << ")";
            } else {
                os << "tabulated(" << p.values.size() << " points)";
            }
        },
        fn_);
    return os.str();
}

// ---------------------------------------------------------------------------
// ProblemSpec

ProblemSpec::Built ProblemSpec::create(double file_size, int horizon, double sigma, PenaltyFn penalty,
                                       LocationId initial_location) {
    require(std::isfinite(sigma) && sigma > 0.0, "sigma must be > 0");
    require(std::isfinite(file_size) && file_size >= 0.0, "file size must be >= 0");
    require(horizon >= 1, "horizon must be >= 1 slot");
    require(initial_location.value >= 1, "initial location must be >= 1");

    const double ratio = file_size / sigma;
    const double rounded = std::ceil(ratio - kGridSlack);
    require(rounded <= 1e8, "file size / sigma is too large");
    const int steps = static_cast<int>(std::max(0.0, rounded));

    std::optional<std::string> warning;
    if (std::abs(ratio - steps) > kGridSlack * std::max(1.0, ratio)) {
        std::ostringstream os;
        os << "file size " << file_size << " Mbit is not a multiple of sigma=" << sigma
           << "; rounded up to " << steps * sigma << " Mbit";
        warning = os.str();
    }
    require(penalty.valid_on_grid(steps, sigma),
            "penalty must satisfy h(0) = 0 and be non-decreasing on the grid (" + penalty.describe() + ")");
    return Built{ProblemSpec(steps, horizon, sigma, std::move(penalty), initial_location), std::move(warning)};
}

// ---------------------------------------------------------------------------
// Primitives

ActionSet admissible_actions(const NetworkModel& model, LocationId l) {
    return model.has_wifi(l) ? ActionSet{Action::Idle, Action::Cellular, Action::WiFi}
                             : ActionSet{Action::Idle, Action::Cellular};
}

namespace {
void require_state(const ProblemSpec& spec, State s) {
    require(s.k >= 0 && s.k <= spec.steps(), "remaining size index " + std::to_string(s.k) + " outside 0.." +
                                                 std::to_string(spec.steps()));
}
void require_admissible(const NetworkModel& model, State s, Action a) {
    if (!model.admissible(s.l, a)) {
        throw DomainError("action " + std::string(to_string(a)) + " not available at location " +
                          std::to_string(s.l.value));
    }
}
}  // namespace

double payment(const NetworkModel& model, const ProblemSpec& spec, State s, Action a) {
    require_state(spec, s);
    require_admissible(model, s, a);
    if (a == Action::Idle) return 0.0;
    return std::min(s.k * spec.sigma(), model.rate(s.l, a)) * model.price(s.l, a);
}

double stage_cost(const NetworkModel& model, const ProblemSpec& spec, CostModel cost, State s, Action a) {
    if (cost == CostModel::Usage) return payment(model, spec, s, a);
    require_state(spec, s);
    require_admissible(model, s, a);
    return a == Action::Cellular ? model.rate(s.l, a) * model.price(s.l, a) : 0.0;
}

double penalty(const ProblemSpec& spec, double k_mbit) {
    const double ratio = k_mbit / spec.sigma();
    const double idx = std::round(ratio);
    if (!std::isfinite(ratio) || std::abs(ratio - idx) > kGridSlack * std::max(1.0, std::abs(ratio))) {
        throw DomainError("k = " + std::to_string(k_mbit) + " Mbit is not on the sigma grid");
    }
    if (idx < 0 || idx > spec.steps()) {
        throw DomainError("k = " + std::to_string(k_mbit) + " Mbit outside [0, K]");
    }
    return spec.penalty().at(static_cast<int>(idx), spec.sigma());
}

double penalty_at_step(const ProblemSpec& spec, int k) {
    if (k < 0 || k > spec.steps()) throw DomainError("grid index outside 0..K/sigma");
    return spec.penalty().at(k, spec.sigma());
}

int transfer_steps(const ProblemSpec& spec, double transfer_mbit) {
    if (!(transfer_mbit > 0.0)) return 0;
    const double q = std::floor(transfer_mbit / spec.sigma() + kGridSlack);
    return q >= 1e9 ? 1000000000 : static_cast<int>(q);
}

int next_file_size(const ProblemSpec& spec, int k, double transfer_mbit) {
    return std::max(0, k - transfer_steps(spec, transfer_mbit));
}

std::vector<Transition> transition_dist(const NetworkModel& model, const ProblemSpec& spec, State s,
                                        Action a) {
    require_state(spec, s);
    require_admissible(model, s, a);
    const int k_next = next_file_size(spec, s.k, model.rate(s.l, a));
    std::vector<Transition> out;
    for (const auto& succ : model.successors(s.l)) {
        out.push_back({State{k_next, LocationId::from_zero_based(succ.location)}, succ.probability});
    }
    return out;
}

}  // namespace offload
