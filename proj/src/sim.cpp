#include "offload/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace offload {

std::vector<double> build_grid_mobility(int rows, int cols, double p_stay) {
    if (rows < 1 || cols < 1) throw DomainError("grid needs at least one cell");
    if (!(p_stay >= 0.0 && p_stay <= 1.0)) throw DomainError("p_stay must lie in [0, 1]");
    const int n = rows * cols;
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int from = r * cols + c;
            std::vector<int> nbrs;
            if (r > 0) nbrs.push_back(from - cols);
            if (c > 0) nbrs.push_back(from - 1);
            if (c + 1 < cols) nbrs.push_back(from + 1);
            if (r + 1 < rows) nbrs.push_back(from + cols);
            double* row = &m[static_cast<std::size_t>(from) * n];
            if (nbrs.empty()) {
                row[from] = 1.0;
                continue;
            }
            row[from] = p_stay;
            const double move = (1.0 - p_stay) / static_cast<double>(nbrs.size());
            for (int to : nbrs) row[to] = move;
        }
    }
    return m;
}

double sample_truncated_normal(double mean, double std, Rng& rng) {
    if (std == 0.0) return std::max(mean, 0.0);
    if (mean < -8.0 * std) throw DomainError("truncated normal: mean too far below zero for rejection sampling");
    std::normal_distribution<double> normal(mean, std);
    for (;;) {
        const double x = normal(rng);
        if (x >= 0.0) return x;
    }
}

Instance sample_instance(const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    const int n = cfg.locations();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // One sub-stream per component, so rejection sampling in one does not
    // shift the draws of another.
    Rng wifi_set_rng(rng()), cell_rng(rng()), wifi_rate_rng(rng()), start_rng(rng());

    NetworkModel::Params p;
    p.num_locations = n;
    p.mobility = build_grid_mobility(cfg.grid_rows, cfg.grid_cols, cfg.p_stay);

    for (int l = 0; l < n; ++l) {
        if (unit(wifi_set_rng) < cfg.wifi_prob) p.wifi_locations.push_back(LocationId::from_zero_based(l));
    }
    if (cfg.wifi_locations) p.wifi_locations = *cfg.wifi_locations;

    std::vector<double> cell_mbps(n), wifi_mbps(n);
    for (int l = 0; l < n; ++l) cell_mbps[l] = sample_truncated_normal(cfg.mu_c_mbps, cfg.rate_std_mbps, cell_rng);
    for (int l = 0; l < n; ++l) wifi_mbps[l] = sample_truncated_normal(cfg.mu_w_mbps, cfg.rate_std_mbps, wifi_rate_rng);
    if (cfg.cellular_rates_mbps) cell_mbps = *cfg.cellular_rates_mbps;
    if (cfg.wifi_rates_mbps) wifi_mbps = *cfg.wifi_rates_mbps;

    std::uniform_int_distribution<int> pick(0, n - 1);
    LocationId start = LocationId::from_zero_based(pick(start_rng));
    if (cfg.initial_location) start = *cfg.initial_location;

    for (int l = 0; l < n; ++l) {
        p.cellular_rate.push_back(units::mbps_to_mbit_per_slot(cell_mbps[l], cfg.slot_seconds));
        p.wifi_rate.push_back(units::mbps_to_mbit_per_slot(wifi_mbps[l], cfg.slot_seconds));
    }
    p.cellular_price.assign(n, units::per_gbyte_to_per_mbit(cfg.price_per_gbyte));
    p.wifi_price.assign(n, 0.0);

    auto built = ProblemSpec::create(cfg.file_mbit(), cfg.horizon(), cfg.sigma_mbit, cfg.penalty, start);
    return Instance{NetworkModel(std::move(p)), std::move(built.spec), std::move(built.warning)};
}

MonotoneModel mean_rate_model(const ScenarioConfig& cfg, const NetworkModel& model) {
    return MonotoneModel::uniform(model, units::mbps_to_mbit_per_slot(cfg.mu_c_mbps, cfg.slot_seconds),
                                  units::mbps_to_mbit_per_slot(cfg.mu_w_mbps, cfg.slot_seconds),
                                  units::per_gbyte_to_per_mbit(cfg.price_per_gbyte));
}

std::vector<LocationId> sample_trajectory(const NetworkModel& model, LocationId start, int horizon, Rng& rng) {
    model.checked(start);
    std::vector<LocationId> out;
    out.reserve(horizon);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LocationId here = start;
    for (int t = 1; t <= horizon; ++t) {
        out.push_back(here);
        const auto succ = model.successors(here);
        double u = unit(rng);
        int next = succ.back().location;
        for (const auto& s : succ) {
            if (u < s.probability) {
                next = s.location;
                break;
            }
            u -= s.probability;
        }
        here = LocationId::from_zero_based(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schemes and episodes

std::string_view to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::General: return "general";
        case SchemeKind::Monotone: return "monotone";
        case SchemeKind::NoOffload: return "no-offload";
        case SchemeKind::Otso: return "otso";
        case SchemeKind::Wiffler: return "wiffler";
    }
    return "?";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
    for (SchemeKind s : kAllSchemes) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

Action WifflerScheme::decide(const NetworkModel& model, const ProblemSpec& spec, State s, int t) {
    state_.observe(t, model.has_wifi(s.l), model.rate(s.l, Action::WiFi));
    return wiffler_decide(state_, model, spec, s, t);
}

EpisodeResult run_episode(Scheme& scheme, const NetworkModel& model, const ProblemSpec& spec,
                          std::span<const LocationId> locations) {
    if (static_cast<int>(locations.size()) < spec.horizon()) {
        throw DomainError("trajectory shorter than the horizon");
    }
    scheme.begin_episode();
    EpisodeResult r;
    int k = spec.steps();
    for (int t = 1; t <= spec.horizon() && k > 0; ++t) {
        const State s{k, locations[t - 1]};
        const Action a = scheme.decide(model, spec, s, t);
        if (!model.admissible(s.l, a)) {
            throw DomainError("scheme chose " + std::string(to_string(a)) + " at t=" + std::to_string(t) +
                              ", location " + std::to_string(s.l.value) + " where it is not available");
        }
        r.trajectory.push_back({t, s.l, k, a});
        r.total_payment += payment(model, spec, s, a);
        switch (a) {
            case Action::Idle: ++r.slots_waiting; break;
            case Action::Cellular: ++r.slots_cellular; break;
            case Action::WiFi: ++r.slots_wifi; break;
        }
        k = next_file_size(spec, k, model.rate(s.l, a));
    }
    r.completed = k == 0;
    r.penalty_paid = penalty_at_step(spec, k);
    r.total_cost = r.total_payment + r.penalty_paid;
    return r;
}

EpisodeResult run_episode(Scheme& scheme, const NetworkModel& model, const ProblemSpec& spec, Rng& rng) {
    const auto path = sample_trajectory(model, spec.initial_location(), spec.horizon(), rng);
    return run_episode(scheme, model, spec, path);
}

EpisodeSummary summarize(const EpisodeResult& r) {
    return {r.completed, r.total_payment, r.penalty_paid, r.total_cost,
            r.slots_cellular, r.slots_wifi, r.slots_waiting};
}

// ---------------------------------------------------------------------------
// Aggregation

namespace {

// Neumaier-compensated sum.
double stable_sum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

constexpr double kZ95 = 1.959963984540054;

}  // namespace

MeanCi mean_ci(std::span<const double> samples) {
    MeanCi out;
    const auto n = static_cast<double>(samples.size());
    if (samples.empty()) return out;
    out.mean = stable_sum(samples) / n;
    if (samples.size() < 2) return out;
    std::vector<double> sq(samples.size());
    std::transform(samples.begin(), samples.end(), sq.begin(), [&](double x) { return (x - out.mean) * (x - out.mean); });
    const double var = stable_sum(sq) / (n - 1.0);
    out.half_width = kZ95 * std::sqrt(var / n);
    return out;
}

AggregateMetrics aggregate(std::span<const EpisodeSummary> runs) {
    AggregateMetrics m;
    m.runs = static_cast<int>(runs.size());
    if (runs.empty()) return m;
    std::vector<double> done, cost, pay, cell, wifi, wait;
    for (const auto& r : runs) {
        done.push_back(r.completed ? 1.0 : 0.0);
        cost.push_back(r.cost);
        pay.push_back(r.payment);
        cell.push_back(r.slots_cellular);
        wifi.push_back(r.slots_wifi);
        wait.push_back(r.slots_waiting);
    }
    m.completion = mean_ci(done);
    m.total_cost = mean_ci(cost);
    m.payment = mean_ci(pay);
    m.slots_cellular = mean_ci(cell).mean;
    m.slots_wifi = mean_ci(wifi).mean;
    m.slots_waiting = mean_ci(wait).mean;
    return m;
}

// ---------------------------------------------------------------------------
// Experiments

std::string_view to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::Deadline: return "deadline";
        case SweepAxis::WifiRate: return "mu_w";
        case SweepAxis::FileSize: return "file";
        case SweepAxis::StayProbability: return "p_stay";
    }
    return "?";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
    for (SweepAxis a : {SweepAxis::Deadline, SweepAxis::WifiRate, SweepAxis::FileSize, SweepAxis::StayProbability}) {
        if (to_string(a) == name) return a;
    }
    return std::nullopt;
}

ScenarioConfig apply_sweep(ScenarioConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::Deadline:
            cfg.deadline_min = value;
            cfg.horizon_slots.reset();
            break;
        case SweepAxis::WifiRate: cfg.mu_w_mbps = value; break;
        case SweepAxis::FileSize: cfg.file_mbytes = value; break;
        case SweepAxis::StayProbability: cfg.p_stay = value; break;
    }
    return cfg;
}

const ExperimentRow& ExperimentResult::row(double sweep_value, SchemeKind scheme) const {
    for (const auto& r : rows) {
        if (r.sweep_value == sweep_value && r.scheme == scheme) return r;
    }
    throw DomainError("no experiment row for scheme " + std::string(to_string(scheme)));
}

namespace {

double current_axis_value(const ScenarioConfig& cfg, SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Deadline: return cfg.deadline_min;
        case SweepAxis::WifiRate: return cfg.mu_w_mbps;
        case SweepAxis::FileSize: return cfg.file_mbytes;
        case SweepAxis::StayProbability: return cfg.p_stay;
    }
    return 0.0;
}

EpisodeSummary run_scheme(SchemeKind kind, const ScenarioConfig& cfg, const Instance& inst,
                          std::span<const LocationId> path) {
    switch (kind) {
        case SchemeKind::General: {
            const Solution sol = solve(inst.model, inst.spec, SolveOptions{cfg.cost_model});
            PolicyScheme scheme(sol.policy);
            return summarize(run_episode(scheme, inst.model, inst.spec, path));
        }
        case SchemeKind::Monotone: {
            const MonotoneSolution sol = solve_monotone(mean_rate_model(cfg, inst.model), inst.spec);
            ThresholdScheme scheme(sol.thresholds);
            return summarize(run_episode(scheme, inst.model, inst.spec, path));
        }
        case SchemeKind::NoOffload: {
            NoOffloadScheme scheme;
            return summarize(run_episode(scheme, inst.model, inst.spec, path));
        }
        case SchemeKind::Otso: {
            OtsoScheme scheme;
            return summarize(run_episode(scheme, inst.model, inst.spec, path));
        }
        case SchemeKind::Wiffler: {
            WifflerScheme scheme(cfg.wiffler_theta, cfg.wiffler_window);
            return summarize(run_episode(scheme, inst.model, inst.spec, path));
        }
    }
    throw std::logic_error("unknown scheme");
}

}  // namespace

ExperimentResult run_experiment(const ScenarioConfig& cfg, std::span<const SchemeKind> schemes, const Sweep& sweep,
                                int jobs) {
    cfg.validate();
    ExperimentResult result{cfg, sweep.axis, {}, {}};
    std::vector<double> values = sweep.values;
    if (values.empty()) values.push_back(current_axis_value(cfg, sweep.axis));

    std::vector<ScenarioConfig> point_cfg;
    for (double v : values) {
        ScenarioConfig c = apply_sweep(cfg, sweep.axis, v);
        c.validate();
        auto built = ProblemSpec::create(c.file_mbit(), c.horizon(), c.sigma_mbit, c.penalty);
        if (built.warning) result.warnings.push_back(*built.warning);
        if (std::find(schemes.begin(), schemes.end(), SchemeKind::Monotone) != schemes.end() &&
            !c.penalty.convex_on_grid(built.spec.steps(), c.sigma_mbit)) {
            throw PreconditionError("convex-penalty", "monotone scheme needs a convex penalty; got " +
                                                          c.penalty.describe());
        }
        point_cfg.push_back(std::move(c));
    }

    const int runs = cfg.runs;
    const std::size_t n_schemes = schemes.size();
    // samples[point][scheme][run]
    std::vector<std::vector<std::vector<EpisodeSummary>>> samples(
        values.size(), std::vector<std::vector<EpisodeSummary>>(n_schemes, std::vector<EpisodeSummary>(runs)));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](int first, int stride) {
        try {
            for (int r = first; r < runs; r += stride) {
                for (std::size_t p = 0; p < values.size(); ++p) {
                    const ScenarioConfig& c = point_cfg[p];
                    Rng instance_rng = make_stream(c.seed, {static_cast<std::uint64_t>(r), 0});
                    const Instance inst = sample_instance(c, instance_rng);
                    Rng mobility_rng = make_stream(c.seed, {static_cast<std::uint64_t>(r), 1});
                    const auto path =
                        sample_trajectory(inst.model, inst.spec.initial_location(), inst.spec.horizon(), mobility_rng);
                    for (std::size_t s = 0; s < n_schemes; ++s) samples[p][s][r] = run_scheme(schemes[s], c, inst, path);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const int threads = std::clamp(jobs, 1, std::max(1, runs));
    if (threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker, i, threads);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t p = 0; p < values.size(); ++p) {
        for (std::size_t s = 0; s < n_schemes; ++s) {
            result.rows.push_back({values[p], schemes[s], aggregate(samples[p][s]), std::move(samples[p][s])});
        }
    }
    return result;
}

}  // namespace offload
