#include "offload/dp_general.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "offload/detail/kernel.hpp"

namespace offload {

namespace detail {

StageKernel::StageKernel(const NetworkModel& model, const ProblemSpec& spec, CostModel cost)
    : locations_(model.num_locations()), steps_(spec.steps()), sigma_(spec.sigma()), cost_model_(cost),
      mobility_(model.mobility()) {
    admissible_.resize(locations_);
    step_.resize(locations_);
    rate_.resize(locations_);
    price_.resize(locations_);
    flat_.resize(locations_);
    for (int l = 0; l < locations_; ++l) {
        const LocationId id = LocationId::from_zero_based(l);
        admissible_[l] = admissible_actions(model, id);
        for (Action a : kAllActions) {
            rate_[l][code(a)] = model.rate(id, a);
            price_[l][code(a)] = model.price(id, a);
            step_[l][code(a)] = transfer_steps(spec, rate_[l][code(a)]);
        }
        flat_[l] = rate_[l][code(Action::Cellular)] * price_[l][code(Action::Cellular)];
    }
}

Action argmin_action(const std::array<double, 3>& values, ActionSet candidates) {
    double best = std::numeric_limits<double>::infinity();
    for (Action a : kAllActions) {
        if (candidates.contains(a) && values[code(a)] < best) best = values[code(a)];
    }
    const double slack = kTieTolerance * std::max(1.0, std::abs(best));
    ActionSet ties;
    for (Action a : kAllActions) {
        if (candidates.contains(a) && values[code(a)] <= best + slack) ties.insert(a);
    }
    return tie_break(ties);
}

}  // namespace detail

Action tie_break(ActionSet candidates) {
    if (candidates.contains(Action::WiFi)) return Action::WiFi;
    if (candidates.contains(Action::Idle)) return Action::Idle;
    if (candidates.contains(Action::Cellular)) return Action::Cellular;
    throw std::logic_error("tie_break: empty candidate set");
}

double q_value(const NetworkModel& model, const ProblemSpec& spec, CostModel cost, const ValueSlice& next,
               State s, Action a) {
    if (s.k < 0 || s.k > spec.steps()) throw DomainError("remaining size index outside the grid");
    const int l = model.checked(s.l);
    if (!model.admissible(s.l, a)) {
        throw DomainError("action " + std::string(to_string(a)) + " not available at location " +
                          std::to_string(s.l.value));
    }
    if (next.steps() != spec.steps() || next.locations() != model.num_locations()) {
        throw DomainError("value slice does not match the model lattice");
    }
    const detail::StageKernel kernel(model, spec, cost);
    return kernel.psi(next, s.k, l, a);
}

void check_lattice(const NetworkModel& model, const ProblemSpec& spec, std::size_t max_cells) {
    model.checked(spec.initial_location());
    const double cells = static_cast<double>(spec.horizon() + 1) * (spec.steps() + 1) * model.num_locations();
    if (cells > static_cast<double>(max_cells)) {
        const auto bytes = static_cast<std::size_t>(cells * (sizeof(double) + sizeof(Action)));
        throw ResourceError("value/policy lattice needs " + std::to_string(static_cast<std::size_t>(cells)) +
                                " cells (~" + std::to_string(bytes >> 20) + " MiB), budget is " +
                                std::to_string(max_cells) + " cells",
                            bytes);
    }
}

Solution solve(const NetworkModel& model, const ProblemSpec& spec, const SolveOptions& options) {
    check_lattice(model, spec, options.max_cells);

    const int horizon = spec.horizon();
    const int steps = spec.steps();
    const int locations = model.num_locations();
    const detail::StageKernel kernel(model, spec, options.cost);

    Solution out{Policy(horizon, steps, locations), ValueTable(horizon, steps, locations)};

    // Boundary: v_{T+1}(k, l) = h(k).
    for (int k = 0; k <= steps; ++k) {
        const double h = spec.penalty().at(k, spec.sigma());
        for (int l = 0; l < locations; ++l) out.values.at(horizon + 1, k, LocationId::from_zero_based(l)) = h;
    }

    std::array<double, 3> psi{};
    for (int t = horizon; t >= 1; --t) {
        const ValueSlice next = out.values.slice(t + 1);
        auto current = out.values.mutable_slice(t);
        for (int l = 0; l < locations; ++l) {
            const ActionSet actions = kernel.admissible(l);
            // Nothing left to send: stay idle.
            current[l] = kernel.psi(next, 0, l, Action::Idle);
            for (int k = 1; k <= steps; ++k) {
                for (Action a : kAllActions) {
                    if (actions.contains(a)) psi[code(a)] = kernel.psi(next, k, l, a);
                }
                const Action best = detail::argmin_action(psi, actions);
                out.policy.set(t, k, LocationId::from_zero_based(l), best);
                current[static_cast<std::size_t>(k) * locations + l] = psi[code(best)];
            }
        }
    }
    return out;
}

}  // namespace offload
