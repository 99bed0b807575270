#include "offload/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace offload {

namespace {

constexpr double kTieTolerance = 1e-9;

bool within_tolerance(double a, double best) {
    return std::abs(a - best) <= kTieTolerance * std::max(1.0, std::abs(best));
}

class TreeSearch {
public:
    TreeSearch(const NetworkModel& model, const ProblemSpec& spec, CostModel cost)
        : model_(model), spec_(spec), cost_(cost) {}

    double value(State s, int t) {
        if (t == spec_.horizon() + 1) return penalty(spec_, s.k * spec_.sigma());
        const auto key = std::make_tuple(t, s.k, s.l.value);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        double best = std::numeric_limits<double>::infinity();
        for (Action a : kAllActions) {
            if (model_.admissible(s.l, a)) best = std::min(best, action_value(s, t, a));
        }
        memo_.emplace(key, best);
        return best;
    }

    double action_value(State s, int t, Action a) {
        double future = 0.0;
        for (const Transition& tr : transition_dist(model_, spec_, s, a)) {
            future += tr.probability * value(tr.next, t + 1);
        }
        return stage_cost(model_, spec_, cost_, s, a) + future;
    }

private:
    const NetworkModel& model_;
    const ProblemSpec& spec_;
    CostModel cost_;
    std::map<std::tuple<int, int, int>, double> memo_;
};

}  // namespace

OracleResult expectimax(const NetworkModel& model, const ProblemSpec& spec, State s, int t, CostModel cost,
                        const OracleLimits& limits) {
    if (model.num_locations() > limits.max_locations || spec.horizon() > limits.max_horizon ||
        spec.steps() > limits.max_steps) {
        throw ResourceError("instance too large for the brute-force oracle (L=" +
                                std::to_string(model.num_locations()) + ", T=" + std::to_string(spec.horizon()) +
                                ", K/sigma=" + std::to_string(spec.steps()) + ")",
                            0);
    }
    if (t < 1 || t > spec.horizon() + 1) throw DomainError("time slot outside 1..T+1");
    model.checked(s.l);

    TreeSearch search(model, spec, cost);
    OracleResult result;
    if (t == spec.horizon() + 1) {
        result.optimal_value = search.value(s, t);
        result.optimal_actions = ActionSet{Action::Idle};
        return result;
    }
    std::array<double, 3> values{};
    double best = std::numeric_limits<double>::infinity();
    for (Action a : kAllActions) {
        if (!model.admissible(s.l, a)) continue;
        values[code(a)] = search.action_value(s, t, a);
        best = std::min(best, values[code(a)]);
    }
    for (Action a : kAllActions) {
        if (model.admissible(s.l, a) && within_tolerance(values[code(a)], best)) result.optimal_actions.insert(a);
    }
    result.optimal_value = best;
    return result;
}

double enumerate_policies(const NetworkModel& model, const ProblemSpec& spec, CostModel cost, double max_policies) {
    const int n_loc = model.num_locations();
    const int n_steps = spec.steps();
    const int horizon = spec.horizon();
    model.checked(spec.initial_location());

    // One decision point per (t, k > 0, l); at k = 0 the policy idles.
    struct Point {
        int t, k, l;
        std::vector<Action> choices;
    };
    std::vector<Point> points;
    double count = 1.0;
    for (int t = 1; t <= horizon; ++t) {
        for (int k = 1; k <= n_steps; ++k) {
            for (int l = 0; l < n_loc; ++l) {
                auto choices = admissible_actions(model, LocationId::from_zero_based(l)).to_vector();
                count *= static_cast<double>(choices.size());
                points.push_back({t, k, l, std::move(choices)});
            }
        }
    }
    if (count > max_policies) {
        throw ResourceError("policy enumeration would visit " + std::to_string(count) + " policies", 0);
    }

    auto point_index = [&](int t, int k, int l) {
        return (static_cast<std::size_t>(t - 1) * n_steps + (k - 1)) * n_loc + l;
    };

    std::vector<std::size_t> digit(points.size(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> dist, next;
    const std::size_t cells = static_cast<std::size_t>(n_steps + 1) * n_loc;
    for (;;) {
        dist.assign(cells, 0.0);
        dist[static_cast<std::size_t>(n_steps) * n_loc + spec.initial_location().zero_based()] = 1.0;
        double total = 0.0;
        for (int t = 1; t <= horizon; ++t) {
            next.assign(cells, 0.0);
            for (int k = 0; k <= n_steps; ++k) {
                for (int l = 0; l < n_loc; ++l) {
                    const double mass = dist[static_cast<std::size_t>(k) * n_loc + l];
                    if (mass == 0.0) continue;
                    const State s{k, LocationId::from_zero_based(l)};
                    const std::size_t pi = k > 0 ? point_index(t, k, l) : 0;
                    const Action a = k > 0 ? points[pi].choices[digit[pi]] : Action::Idle;
                    total += mass * stage_cost(model, spec, cost, s, a);
                    for (const Transition& tr : transition_dist(model, spec, s, a)) {
                        next[static_cast<std::size_t>(tr.next.k) * n_loc + tr.next.l.zero_based()] +=
                            mass * tr.probability;
                    }
                }
            }
            dist.swap(next);
        }
        for (int k = 0; k <= n_steps; ++k) {
            for (int l = 0; l < n_loc; ++l) {
                total += dist[static_cast<std::size_t>(k) * n_loc + l] * penalty(spec, k * spec.sigma());
            }
        }
        best = std::min(best, total);

        // Advance the mixed-radix counter over all decision points.
        std::size_t i = 0;
        while (i < points.size() && ++digit[i] == points[i].choices.size()) digit[i++] = 0;
        if (i == points.size()) break;
    }
    return best;
}

}  // namespace offload
