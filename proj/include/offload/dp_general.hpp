#pragma once

// Exact finite-horizon backward induction over the (t, k, l) lattice.

#include <cstddef>

#include "offload/lattice.hpp"
#include "offload/model.hpp"

namespace offload {

struct SolveOptions {
    CostModel cost = CostModel::Usage;
    /// Upper bound on value-table cells; larger lattices raise ResourceError.
    std::size_t max_cells = std::size_t{1} << 28;
};

struct Solution {
    Policy policy;
    ValueTable values;
};

/// Picks one action from a set of equally good candidates.
/// Preference: WiFi, then Idle, then Cellular (zero-price progress first,
/// paid transmission last). Throws std::logic_error on an empty set.
Action tie_break(ActionSet candidates);

/// psi_t(k, l, a): one-slot cost plus expected cost-to-go under `next`
/// (the value slice at t + 1).
double q_value(const NetworkModel& model, const ProblemSpec& spec, CostModel cost, const ValueSlice& next,
               State s, Action a);

/// Optimal policy and value table. At k = 0 the policy is Idle.
Solution solve(const NetworkModel& model, const ProblemSpec& spec, const SolveOptions& options = {});

/// Throws ResourceError if a (T+1) x (K/sigma+1) x L table exceeds the budget,
/// DomainError if spec.initial_location() is outside the model.
void check_lattice(const NetworkModel& model, const ProblemSpec& spec, std::size_t max_cells);

}  // namespace offload
