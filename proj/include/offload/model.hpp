#pragma once

// Core domain types for delay-aware offloading.
//
// Units used throughout the library:
//   data    megabits (Mbit)
//   rates   Mbit per slot (already multiplied by the slot length)
//   prices  dollars per Mbit
//   money   dollars
// Remaining file sizes live on a grid of step `sigma`; a State stores the
// grid index, not the megabit amount.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "offload/errors.hpp"

namespace offload {

enum class Action : std::uint8_t { Idle = 0, Cellular = 1, WiFi = 2 };

inline constexpr std::array<Action, 3> kAllActions{Action::Idle, Action::Cellular, Action::WiFi};

std::string_view to_string(Action a);
constexpr int code(Action a) { return static_cast<int>(a); }

/// Small value set of actions.
class ActionSet {
public:
    constexpr ActionSet() = default;
    constexpr ActionSet(std::initializer_list<Action> actions) {
        for (Action a : actions) insert(a);
    }

    constexpr void insert(Action a) { bits_ |= bit(a); }
    constexpr bool contains(Action a) const { return (bits_ & bit(a)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return (bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1); }
    constexpr bool intersects(ActionSet other) const { return (bits_ & other.bits_) != 0; }
    std::vector<Action> to_vector() const;

    friend constexpr bool operator==(ActionSet, ActionSet) = default;

private:
    static constexpr std::uint8_t bit(Action a) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(a));
    }
    std::uint8_t bits_ = 0;
};

std::string to_string(ActionSet s);

/// 1-based location index, as used in all external formats.
struct LocationId {
    int value = 1;

    constexpr int zero_based() const { return value - 1; }
    static constexpr LocationId from_zero_based(int i) { return LocationId{i + 1}; }
    friend constexpr auto operator<=>(LocationId, LocationId) = default;
};

/// Static description of the network the user moves through.
class NetworkModel {
public:
    struct Params {
        int num_locations = 0;
        std::vector<LocationId> wifi_locations;
        /// Row-major L x L matrix, entry [l * L + l'] = p(l' | l).
        std::vector<double> mobility;
        /// Per-location values, indexed by zero-based location.
        std::vector<double> cellular_price;
        std::vector<double> wifi_price;
        std::vector<double> cellular_rate;
        std::vector<double> wifi_rate;
    };

    struct Successor {
        int location;  // zero-based
        double probability;
    };

    explicit NetworkModel(Params params);

    int num_locations() const { return num_locations_; }
    bool has_wifi(LocationId l) const { return wifi_[checked(l)] != 0; }
    std::vector<LocationId> wifi_locations() const;

    double transition(LocationId from, LocationId to) const {
        return mobility_[static_cast<std::size_t>(checked(from)) * num_locations_ + checked(to)];
    }
    /// Dense row p(. | from), length L.
    std::span<const double> mobility_row(int from_zero_based) const {
        return {mobility_.data() + static_cast<std::size_t>(from_zero_based) * num_locations_,
                static_cast<std::size_t>(num_locations_)};
    }
    /// Non-zero entries of p(. | from) in increasing location order.
    std::span<const Successor> successors(LocationId from) const { return successors_[checked(from)]; }
    const std::vector<double>& mobility() const { return mobility_; }

    /// Price per Mbit; 0 for Idle.
    double price(LocationId l, Action a) const;
    /// Mbit per slot; 0 for Idle.
    double rate(LocationId l, Action a) const;

    bool admissible(LocationId l, Action a) const { return a != Action::WiFi || has_wifi(l); }

    /// Throws DomainError unless 1 <= l <= L. Returns the zero-based index.
    int checked(LocationId l) const;

private:
    int num_locations_;
    std::vector<std::uint8_t> wifi_;
    std::vector<double> mobility_;
    std::vector<std::vector<Successor>> successors_;
    std::vector<double> cellular_price_, wifi_price_, cellular_rate_, wifi_rate_;
};

/// h(k) = b * k^2 with k in Mbit.
struct QuadraticPenalty {
    double b = 1.0;
    friend bool operator==(const QuadraticPenalty&, const QuadraticPenalty&) = default;
};

/// h(0) = 0, h(k) = z for k > 0.
struct StepPenalty {
    double z = 100000.0;
    friend bool operator==(const StepPenalty&, const StepPenalty&) = default;
};

/// Arbitrary values on the k-grid; values[i] = h(i * sigma).
struct TabulatedPenalty {
    std::vector<double> values;
    friend bool operator==(const TabulatedPenalty&, const TabulatedPenalty&) = default;
};

class PenaltyFn {
public:
    using Variant = std::variant<QuadraticPenalty, StepPenalty, TabulatedPenalty>;

    PenaltyFn() = default;
    PenaltyFn(QuadraticPenalty p) : fn_(p) {}
    PenaltyFn(StepPenalty p) : fn_(p) {}
    PenaltyFn(TabulatedPenalty p) : fn_(std::move(p)) {}

    /// Penalty at grid index `steps` for grid step `sigma` (Mbit).
    double at(int steps, double sigma) const;

    /// h(0) = 0 and h non-decreasing over indices 0..max_steps.
    bool valid_on_grid(int max_steps, double sigma) const;
    /// Second differences non-negative over indices 0..max_steps.
    bool convex_on_grid(int max_steps, double sigma) const;

    const Variant& variant() const { return fn_; }
    std::string describe() const;

    friend bool operator==(const PenaltyFn&, const PenaltyFn&) = default;

private:
    Variant fn_ = QuadraticPenalty{};
};

/// File size, horizon, grid step, penalty and starting location.
class ProblemSpec {
public:
    struct Built;

    /// Validates and builds a spec. A file size that is not a multiple of
    /// `sigma` is rounded up to the next grid point and a warning is
    /// returned alongside.
    static Built create(double file_size, int horizon, double sigma, PenaltyFn penalty,
                        LocationId initial_location = LocationId{1});

    double file_size() const { return steps_ * sigma_; }
    int horizon() const { return horizon_; }
    double sigma() const { return sigma_; }
    /// K / sigma: number of grid steps in a full file.
    int steps() const { return steps_; }
    const PenaltyFn& penalty() const { return penalty_; }
    LocationId initial_location() const { return initial_location_; }

private:
    ProblemSpec(int steps, int horizon, double sigma, PenaltyFn penalty, LocationId l1)
        : steps_(steps), horizon_(horizon), sigma_(sigma), penalty_(std::move(penalty)),
          initial_location_(l1) {}

    int steps_;
    int horizon_;
    double sigma_;
    PenaltyFn penalty_;
    LocationId initial_location_;
};

struct ProblemSpec::Built {
    ProblemSpec spec;
    std::optional<std::string> warning;
};

/// k: remaining data as a grid index (k * sigma Mbit); l: current location.
struct State {
    int k = 0;
    LocationId l{};
    friend constexpr bool operator==(State, State) = default;
};

/// How per-slot payments are charged.
///  Usage: min{k, rate} * price (usage-based pricing).
///  Flat:  rate(l, Cellular) * price(l, Cellular) for Cellular, 0 otherwise.
enum class CostModel { Usage, Flat };

std::string_view to_string(CostModel c);

ActionSet admissible_actions(const NetworkModel& model, LocationId l);

/// Usage-based payment for one slot. Throws DomainError for inadmissible actions.
double payment(const NetworkModel& model, const ProblemSpec& spec, State s, Action a);

/// One-slot cost under the chosen cost model.
double stage_cost(const NetworkModel& model, const ProblemSpec& spec, CostModel cost, State s, Action a);

/// h(k) for k given in Mbit. Throws DomainError when k is off the grid or out of [0, K].
double penalty(const ProblemSpec& spec, double k_mbit);
double penalty_at_step(const ProblemSpec& spec, int k);

/// Transfer amount quantized down to whole grid steps.
int transfer_steps(const ProblemSpec& spec, double transfer_mbit);

/// [k - q(transfer)]^+ on the grid.
int next_file_size(const ProblemSpec& spec, int k, double transfer_mbit);

struct Transition {
    State next;
    double probability;
};

/// Successor distribution of (s, a): deterministic in k, Markov in l.
std::vector<Transition> transition_dist(const NetworkModel& model, const ProblemSpec& spec, State s,
                                        Action a);

namespace units {
inline constexpr double kMbitPerGbyte = 8000.0;
inline constexpr double kMbitPerMbyte = 8.0;

constexpr double mbps_to_mbit_per_slot(double mbps, double slot_seconds) { return mbps * slot_seconds; }
constexpr double per_gbyte_to_per_mbit(double dollars_per_gbyte) { return dollars_per_gbyte / kMbitPerGbyte; }
constexpr double mbytes_to_mbit(double mbytes) { return mbytes * kMbitPerMbyte; }
}  // namespace units

}  // namespace offload
