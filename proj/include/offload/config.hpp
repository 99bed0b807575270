#pragma once

// Scenario configuration: a flat `key = value` text format, one key per
// line, `#` starts a comment. Every key is optional; defaults reproduce the
// reference simulation setup (4x4 grid, 10 s slots, 6 $/Gbyte cellular,
// free Wi-Fi, quadratic penalty with b = 1).
//
//   key                  unit / form                 default
//   grid_rows            integer                     4
//   grid_cols            integer                     4
//   p_stay               probability                 0.6
//   wifi_prob            probability                 0.5
//   mu_c_mbps            Mbit/s (cellular mean)      90
//   mu_w_mbps            Mbit/s (Wi-Fi mean)         20
//   rate_std_mbps        Mbit/s                      5
//   price_per_gbyte      $ per Gbyte (cellular)      6
//   file_mbytes          Mbyte                       750
//   deadline_min         minutes                     2
//   slot_seconds         seconds                     10
//   sigma_mbit           Mbit (grid step)            10
//   penalty              quadratic | step | tabulated quadratic
//   penalty_b            $ per Mbit^2                1
//   penalty_z            $                           100000
//   penalty_values       comma list, $ per grid step (tabulated only)
//   cost_model           usage | flat                usage
//   runs                 integer                     1000
//   seed                 unsigned integer            1
//   wiffler_theta        dimensionless               1
//   wiffler_window       encounters                  4
//   horizon_slots        integer, overrides deadline_min
//   wifi_locations       comma list of 1-based ids or `none`, overrides wifi_prob
//   cellular_rates_mbps  comma list, one per location, overrides sampling
//   wifi_rates_mbps      comma list, one per location, overrides sampling
//   initial_location     1-based id, overrides the uniform draw

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "offload/model.hpp"

namespace offload {

struct ScenarioConfig {
    int grid_rows = 4;
    int grid_cols = 4;
    double p_stay = 0.6;
    double wifi_prob = 0.5;
    double mu_c_mbps = 90.0;
    double mu_w_mbps = 20.0;
    double rate_std_mbps = 5.0;
    double price_per_gbyte = 6.0;
    double file_mbytes = 750.0;
    double deadline_min = 2.0;
    double slot_seconds = 10.0;
    double sigma_mbit = 10.0;
    PenaltyFn penalty = QuadraticPenalty{1.0};
    CostModel cost_model = CostModel::Usage;
    int runs = 1000;
    std::uint64_t seed = 1;
    double wiffler_theta = 1.0;
    int wiffler_window = 4;

    std::optional<int> horizon_slots;
    std::optional<std::vector<LocationId>> wifi_locations;
    std::optional<std::vector<double>> cellular_rates_mbps;
    std::optional<std::vector<double>> wifi_rates_mbps;
    std::optional<LocationId> initial_location;

    int locations() const { return grid_rows * grid_cols; }
    double file_mbit() const { return units::mbytes_to_mbit(file_mbytes); }
    /// T = 60 D / slot length, or horizon_slots when given.
    int horizon() const;

    /// Throws ValidationError describing the first inconsistency.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig parse_config_file(const std::string& path);
std::string serialize(const ScenarioConfig& cfg);

}  // namespace offload
