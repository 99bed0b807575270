#pragma once

// Per-instance precomputation shared by the backward-induction solvers so
// that both evaluate action values with identical arithmetic.

#include <array>
#include <vector>

#include "offload/lattice.hpp"
#include "offload/model.hpp"

namespace offload::detail {

class StageKernel {
public:
    StageKernel(const NetworkModel& model, const ProblemSpec& spec, CostModel cost);

    int locations() const { return locations_; }
    int steps() const { return steps_; }
    ActionSet admissible(int l) const { return admissible_[l]; }

    int next_k(int k, int l, Action a) const {
        const int next = k - step_[l][code(a)];
        return next > 0 ? next : 0;
    }

    double cost(int k, int l, Action a) const {
        if (cost_model_ == CostModel::Flat) return a == Action::Cellular ? flat_[l] : 0.0;
        if (a == Action::Idle) return 0.0;
        const double sent = k * sigma_;
        const double r = rate_[l][code(a)];
        return (sent < r ? sent : r) * price_[l][code(a)];
    }

    /// sum over l' of p(l' | l) * next(k, l'), summed in location order.
    double expected(const ValueSlice& next, int k, int l) const {
        const double* p = &mobility_[static_cast<std::size_t>(l) * locations_];
        const auto row = next.row(k);
        double acc = 0.0;
        for (int j = 0; j < locations_; ++j) acc += p[j] * row[j];
        return acc;
    }

    double psi(const ValueSlice& next, int k, int l, Action a) const {
        return cost(k, l, a) + expected(next, next_k(k, l, a), l);
    }

private:
    int locations_;
    int steps_;
    double sigma_;
    CostModel cost_model_;
    std::vector<double> mobility_;
    std::vector<ActionSet> admissible_;
    std::vector<std::array<int, 3>> step_;
    std::vector<std::array<double, 3>> rate_;
    std::vector<std::array<double, 3>> price_;
    std::vector<double> flat_;
};

/// Action values closer than this (relative to max(1, |min|)) count as tied.
/// Mathematically equal values reached through different summation orders
/// differ by a few ulps; without the slack such ties would be broken by
/// rounding noise instead of by the preference order.
inline constexpr double kTieTolerance = 1e-10;

/// Argmin over `candidates` of `values[code(a)]`, ties resolved by tie_break.
Action argmin_action(const std::array<double, 3>& values, ActionSet candidates);

}  // namespace offload::detail
