#pragma once

// Structural property checks on a solved instance. Each check reports the
// first lattice point that violates it.
//
//   name                 holds on            statement
//   value-monotone-k     every instance      v_t(k+1, l) >= v_t(k, l)
//   value-monotone-t     structured          v_{t+1}(k, l) >= v_t(k, l)
//   wifi-dominance       structured          psi(Idle) >= psi(WiFi) at Wi-Fi locations;
//                                            always WiFi when Wi-Fi moves at least as
//                                            many grid steps as cellular
//   threshold-k          structured          per (l, t) some k* makes the free action optimal
//                                            below k* and Cellular optimal from k* to K
//   threshold-monotone   structured          valid thresholds can be chosen with
//                                            k*(l, t-1) >= k*(l, t), hence t*(k, l) >= t*(k+1, l)
//   cross-difference     structured          psi_t sub/superadditive on k x {free, Cellular}
//   increment-monotone   structured          v_{t+1}(a, l) - v_{t+1}(b, l) >= v_t(a, l) - v_t(b, l)
//                                            with a, b the successors of k under the free
//                                            action and Cellular
//   oracle               small instances     v_1(K, l_1) matches exhaustive search
//
// "Structured" means free Wi-Fi, one cellular price and one rate per
// network everywhere, a convex penalty and the flat cellular charge; checks
// that need it are skipped with a reason otherwise.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "offload/dp_general.hpp"
#include "offload/model.hpp"

namespace offload {

enum class Property {
    ValueMonotoneK,
    ValueMonotoneT,
    WifiDominance,
    ThresholdK,
    ThresholdMonotone,
    CrossDifference,
    IncrementMonotone,
    Oracle,
};

inline constexpr std::array<Property, 8> kAllProperties{
    Property::ValueMonotoneK,  Property::ValueMonotoneT,    Property::WifiDominance,
    Property::ThresholdK,      Property::ThresholdMonotone, Property::CrossDifference,
    Property::IncrementMonotone, Property::Oracle,
};

std::string_view to_string(Property p);
/// Accepts the canonical names above and the short forms lemma1a, lemma1b,
/// lemma2, theorem2, theorem3.
std::optional<Property> parse_property(std::string_view name);

enum class CheckStatus { Pass, Fail, Skipped };
std::string_view to_string(CheckStatus s);

struct LatticePoint {
    int t;
    int k;
    LocationId l;
};

struct PropertyReport {
    Property property;
    CheckStatus status;
    std::string detail;  // failure description or skip reason
    std::optional<LatticePoint> counterexample;
};

/// Empty when the instance is in the structured regime, otherwise the first
/// violated condition.
std::optional<std::string> structure_violation(const NetworkModel& model, const ProblemSpec& spec, CostModel cost);

struct VerifyOptions {
    CostModel cost = CostModel::Usage;
    int cross_difference_samples = 10000;
    std::uint64_t seed = 1;
    /// Relative tolerance, scaled by max(1, largest |value| in the table).
    double tolerance = 1e-9;
};

/// `solution` must come from solve(model, spec, {options.cost}).
std::vector<PropertyReport> verify(const NetworkModel& model, const ProblemSpec& spec, const Solution& solution,
                                   std::span<const Property> properties, const VerifyOptions& options = {});

PropertyReport verify_one(const NetworkModel& model, const ProblemSpec& spec, const Solution& solution,
                          Property property, const VerifyOptions& options = {});

}  // namespace offload
