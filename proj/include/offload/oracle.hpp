#pragma once

// Brute-force reference solvers for tiny instances. These evaluate the
// expected total cost directly from the model primitives (payment,
// transition_dist, penalty) and share no code with the backward-induction
// solvers.

#include "offload/model.hpp"

namespace offload {

struct OracleLimits {
    int max_locations = 4;
    int max_horizon = 6;
    int max_steps = 6;
};

struct OracleResult {
    double optimal_value = 0.0;
    /// Every action within the tie tolerance of the optimum at the root.
    ActionSet optimal_actions;
};

/// Minimum expected cost from state `s` at slot `t` by depth-first
/// recursion over the full decision tree. Throws ResourceError when the
/// instance exceeds `limits`.
OracleResult expectimax(const NetworkModel& model, const ProblemSpec& spec, State s, int t,
                        CostModel cost = CostModel::Usage, const OracleLimits& limits = {});

/// Minimum over every deterministic Markov policy of the expected cost
/// from (K, l1) at t = 1, each policy evaluated by forward propagation of
/// the state distribution. Throws ResourceError beyond `max_policies`.
double enumerate_policies(const NetworkModel& model, const ProblemSpec& spec, CostModel cost = CostModel::Usage,
                          double max_policies = 2e6);

}  // namespace offload
