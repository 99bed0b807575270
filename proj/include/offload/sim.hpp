#pragma once

// Monte-Carlo experiment engine: random instances on a grid, episode
// execution for every scheme on shared trajectories, and aggregation.
//
// Random streams. For run r of a sweep point, derive_seed(seed, {r, 0})
// drives the instance draw and derive_seed(seed, {r, 1}) drives the
// location trajectory. The instance stream first emits four seeds, for the
// Wi-Fi set, the cellular rates, the Wi-Fi rates and the initial location,
// so changing one rate parameter leaves the other components unchanged. The sweep
// value does not enter the stream path, so every scheme and every sweep
// point sees the same draws for a given run index.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "offload/baselines.hpp"
#include "offload/config.hpp"
#include "offload/dp_general.hpp"
#include "offload/dp_monotone.hpp"
#include "offload/model.hpp"
#include "offload/rng.hpp"

namespace offload {

/// Row-major L x L matrix for a rows x cols grid with 1-based row-major
/// ids: stay with `p_stay`, otherwise move to one of the 4-neighbours
/// (no wraparound) uniformly. A cell with no neighbours stays put.
std::vector<double> build_grid_mobility(int rows, int cols, double p_stay);

/// Normal(mean, std) conditioned on [0, inf), by rejection.
double sample_truncated_normal(double mean, double std, Rng& rng);

struct Instance {
    NetworkModel model;
    ProblemSpec spec;
    std::optional<std::string> warning;
};

Instance sample_instance(const ScenarioConfig& cfg, Rng& rng);

/// Structured model that knows only the configured mean rates.
MonotoneModel mean_rate_model(const ScenarioConfig& cfg, const NetworkModel& model);

std::vector<LocationId> sample_trajectory(const NetworkModel& model, LocationId start, int horizon, Rng& rng);

enum class SchemeKind { General, Monotone, NoOffload, Otso, Wiffler };

std::string_view to_string(SchemeKind s);
std::optional<SchemeKind> parse_scheme(std::string_view name);
inline constexpr std::array<SchemeKind, 5> kAllSchemes{SchemeKind::General, SchemeKind::Monotone,
                                                       SchemeKind::NoOffload, SchemeKind::Otso,
                                                       SchemeKind::Wiffler};

/// Per-slot decision source used by run_episode.
class Scheme {
public:
    virtual ~Scheme() = default;
    virtual void begin_episode() {}
    virtual Action decide(const NetworkModel& model, const ProblemSpec& spec, State s, int t) = 0;
};

class PolicyScheme final : public Scheme {
public:
    explicit PolicyScheme(const Policy& policy) : policy_(policy) {}
    Action decide(const NetworkModel&, const ProblemSpec&, State s, int t) override { return policy_.at(t, s.k, s.l); }

private:
    const Policy& policy_;
};

class ThresholdScheme final : public Scheme {
public:
    explicit ThresholdScheme(const ThresholdPolicy& tp) : tp_(tp) {}
    Action decide(const NetworkModel&, const ProblemSpec&, State s, int t) override { return offload::decide(tp_, s, t); }

private:
    const ThresholdPolicy& tp_;
};

class NoOffloadScheme final : public Scheme {
public:
    Action decide(const NetworkModel&, const ProblemSpec&, State s, int) override { return no_offload_decide(s); }
};

class OtsoScheme final : public Scheme {
public:
    Action decide(const NetworkModel& model, const ProblemSpec&, State s, int) override {
        return otso_decide(model, s);
    }
};

class WifflerScheme final : public Scheme {
public:
    WifflerScheme(double theta, int window) : state_(theta, window) {}
    void begin_episode() override { state_.reset(); }
    Action decide(const NetworkModel& model, const ProblemSpec& spec, State s, int t) override;
    const WifflerState& state() const { return state_; }

private:
    WifflerState state_;
};

struct TrajectoryStep {
    int t;
    LocationId l;
    int k;  // grid index before the action
    Action a;
};

struct EpisodeResult {
    bool completed = false;
    double total_payment = 0.0;
    double penalty_paid = 0.0;
    double total_cost = 0.0;
    int slots_cellular = 0;
    int slots_wifi = 0;
    int slots_waiting = 0;
    std::vector<TrajectoryStep> trajectory;
};

/// Runs t = 1..T (stopping once k = 0) along the given locations, charging
/// usage-based payments and the penalty on whatever remains after T.
/// `locations[t-1]` is the location at slot t. Throws DomainError if the
/// scheme picks an inadmissible action.
EpisodeResult run_episode(Scheme& scheme, const NetworkModel& model, const ProblemSpec& spec,
                          std::span<const LocationId> locations);

/// Same, sampling the trajectory from spec.initial_location().
EpisodeResult run_episode(Scheme& scheme, const NetworkModel& model, const ProblemSpec& spec, Rng& rng);

struct EpisodeSummary {
    bool completed;
    double payment;
    double penalty;
    double cost;
    int slots_cellular;
    int slots_wifi;
    int slots_waiting;
};

EpisodeSummary summarize(const EpisodeResult& r);

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;  // 95% normal-approximation half-width
};

struct AggregateMetrics {
    int runs = 0;
    MeanCi completion;
    MeanCi total_cost;
    MeanCi payment;
    double slots_cellular = 0.0;
    double slots_wifi = 0.0;
    double slots_waiting = 0.0;
};

MeanCi mean_ci(std::span<const double> samples);
AggregateMetrics aggregate(std::span<const EpisodeSummary> runs);

enum class SweepAxis { Deadline, WifiRate, FileSize, StayProbability };

std::string_view to_string(SweepAxis a);
std::optional<SweepAxis> parse_sweep_axis(std::string_view name);

struct Sweep {
    SweepAxis axis = SweepAxis::Deadline;
    std::vector<double> values;
};

/// Config with the sweep parameter replaced: deadline in minutes, Wi-Fi mean
/// in Mbit/s, file size in Mbyte, stay probability.
ScenarioConfig apply_sweep(ScenarioConfig cfg, SweepAxis axis, double value);

struct ExperimentRow {
    double sweep_value;
    SchemeKind scheme;
    AggregateMetrics metrics;
    std::vector<EpisodeSummary> runs;  // indexed by run
};

struct ExperimentResult {
    ScenarioConfig config;
    SweepAxis axis;
    std::vector<ExperimentRow> rows;  // sweep-major, schemes in request order
    std::vector<std::string> warnings;

    const ExperimentRow& row(double sweep_value, SchemeKind scheme) const;
};

/// For every sweep value and run: draw an instance, plan each requested
/// scheme (general: exact sampled rates; monotone: configured means only),
/// and run all schemes on the same trajectory. `jobs` worker threads split
/// the runs; results do not depend on `jobs`.
ExperimentResult run_experiment(const ScenarioConfig& cfg, std::span<const SchemeKind> schemes, const Sweep& sweep,
                                int jobs = 1);

}  // namespace offload
