#pragma once

// Output formats. All CSV is comma-separated with a header row, '.' as the
// decimal separator and no quoting (no field ever contains a comma).
//
//   policy       t,k,l,action          action code 0 idle, 1 cellular, 2 wifi
//   values       t,k,l,value           t runs to T+1 (the penalty slice)
//   thresholds   l,t,k_star            k_star is a grid index, "inf" for never
//   policy map   t,0,1,...,K/sigma     one row per slot, action codes
//   experiment   sweep_value,scheme,completion_prob,completion_ci,mean_cost,cost_ci,
//                mean_payment,payment_ci,slots_cellular,slots_wifi,slots_waiting
//
// k is always a grid index (k * sigma Mbit remain) and l is 1-based.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "offload/dp_monotone.hpp"
#include "offload/lattice.hpp"
#include "offload/sim.hpp"

namespace offload {

/// T x (K/sigma + 1) matrix of action codes: rows t = 1..T, columns k = 0..K/sigma.
using PolicyMap = std::vector<std::vector<int>>;

PolicyMap policy_map(const Policy& policy, LocationId l);
PolicyMap policy_map(const ThresholdPolicy& thresholds, LocationId l);

/// Number of action changes along k = 1..K/sigma in row t (1-based).
int switches_along_k(const PolicyMap& map, int t);

void write_policy_csv(std::ostream& os, const Policy& policy);
void write_values_csv(std::ostream& os, const ValueTable& values);
void write_thresholds_csv(std::ostream& os, const ThresholdPolicy& thresholds);
void write_policy_map_csv(std::ostream& os, const PolicyMap& map);
void write_experiment_csv(std::ostream& os, const ExperimentResult& result);

/// Full config, sweep metadata, warnings and every aggregate row.
nlohmann::json experiment_json(const ExperimentResult& result);

/// Writes `text` to `path`, or to stdout when `path` is "-" or empty.
void write_output(const std::string& path, const std::string& text);

}  // namespace offload
