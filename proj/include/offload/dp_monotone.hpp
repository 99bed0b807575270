#pragma once

// Threshold-form solver for the structured regime: convex penalty, free
// Wi-Fi, location-independent cellular price and location-independent
// rates, with the cellular charge approximated by a flat per-slot cost q.
//
// In that regime the optimal decision at each (l, t) switches exactly once
// along k: below k*(l, t) the user idles (no Wi-Fi) or uses Wi-Fi, at or
// above it the user goes cellular. k*(l, t) is non-increasing in t, which
// lets each backward pass start its two-action search at k*(l, t + 1).

#include <string>
#include <vector>

#include "offload/dp_general.hpp"
#include "offload/lattice.hpp"
#include "offload/model.hpp"

namespace offload {

enum class WifiMode {
    NoWifi,       // no Wi-Fi at this location: Idle below threshold
    WifiSlower,   // Wi-Fi rate <= cellular rate: Wi-Fi below threshold
    WifiFaster,   // Wi-Fi rate > cellular rate: always Wi-Fi
};

std::string_view to_string(WifiMode m);

/// Network satisfying the structural assumptions. Holds an equivalent
/// general NetworkModel so the same instance can be fed to `solve`.
class MonotoneModel {
public:
    /// Uniform-rate model on the mobility chain and Wi-Fi set of `base`.
    /// `cellular_price` is dollars per Mbit; Wi-Fi is free.
    static MonotoneModel uniform(const NetworkModel& base, double cellular_rate, double wifi_rate,
                                 double cellular_price);

    /// Validates the structural assumptions on `model` and throws
    /// PreconditionError naming the first violated clause. With
    /// `approximate`, rates and cellular price are replaced by their
    /// averages (cellular over all locations, Wi-Fi over Wi-Fi locations)
    /// and the Wi-Fi price is forced to zero instead.
    static MonotoneModel from_network(const NetworkModel& model, bool approximate = false);

    const NetworkModel& network() const { return network_; }
    /// Flat cellular charge per slot.
    double q() const { return q_; }
    double cellular_rate() const { return mu1_; }
    double wifi_rate() const { return mu2_; }

private:
    MonotoneModel(NetworkModel network, double mu1, double mu2, double price);

    NetworkModel network_;
    double mu1_;
    double mu2_;
    double q_;
};

/// k*(l, t) table. Thresholds are grid indices; `infinity()` (K/sigma + 1)
/// means the column never selects Cellular.
class ThresholdPolicy {
public:
    ThresholdPolicy() = default;
    ThresholdPolicy(int horizon, int steps, std::vector<WifiMode> modes);

    int horizon() const { return horizon_; }
    int steps() const { return steps_; }
    int locations() const { return static_cast<int>(modes_.size()); }
    int infinity() const { return steps_ + 1; }

    int k_star(LocationId l, int t) const { return k_star_[index(l, t)]; }
    void set_k_star(LocationId l, int t, int k) { k_star_[index(l, t)] = k; }
    WifiMode mode(LocationId l) const { return modes_[l.zero_based()]; }

    friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;

private:
    std::size_t index(LocationId l, int t) const {
        return static_cast<std::size_t>(l.zero_based()) * horizon_ + (t - 1);
    }

    int horizon_ = 0;
    int steps_ = 0;
    std::vector<WifiMode> modes_;
    std::vector<int> k_star_;
};

struct MonotoneSolution {
    ThresholdPolicy thresholds;
    ValueTable values;
};

struct ThresholdRow {
    int k_star;
    std::vector<double> values;  // v_t(k, l) for k = 0..K/sigma
};

/// Single-location backward pass at time t given v_{t+1} and k*(l, t+1).
ThresholdRow threshold_pass(const MonotoneModel& mm, const ProblemSpec& spec, LocationId l, int t,
                            const ValueSlice& next, int k_star_next);

/// Throws PreconditionError("convex-penalty") if spec.penalty() is not
/// convex on the grid.
MonotoneSolution solve_monotone(const MonotoneModel& mm, const ProblemSpec& spec,
                                std::size_t max_cells = SolveOptions{}.max_cells);

/// Decision rule induced by the thresholds. Idle when k = 0.
Action decide(const ThresholdPolicy& tp, State s, int t);

/// t*(k, l) = min{t : k >= k*(l, t)}, or T + 1 if no such t (always T + 1 for k = 0).
int t_star_view(const ThresholdPolicy& tp, int k, LocationId l);

}  // namespace offload
