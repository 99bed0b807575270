// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "offload/config.hpp"
#include "offload/dp_general.hpp"
#include "offload/dp_monotone.hpp"
#include "offload/io.hpp"
#include "offload/oracle.hpp"
#include "offload/sim.hpp"
#include "offload/verify.hpp"
#include "random_instances.hpp"

namespace offload {
namespace {

using Clock = std::chrono::steady_clock;

const std::string kSourceDir = OFFLOAD_SOURCE_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Instance first_instance(const ScenarioConfig& cfg) {
    Rng rng = make_stream(cfg.seed, {0, 0});
    return sample_instance(cfg, rng);
}

// 1. Backward induction agrees with exhaustive search.
Outcome oracle_equivalence() {
    Outcome out;
    const auto start = Clock::now();
    Rng rng(20240101);
    const int trials = 250;
    int value_miss = 0, argmin_miss = 0;
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        const auto inst = testing::random_general_instance(rng, {3, 5, 5});
        const auto sol = solve(inst.model, inst.spec, SolveOptions{inst.cost});
        const State root{inst.spec.steps(), inst.spec.initial_location()};
        const auto ref = expectimax(inst.model, inst.spec, root, 1, inst.cost);
        const double v = sol.values.at(1, root.k, root.l);
        const double rel = std::abs(v - ref.optimal_value) / std::max(1.0, std::abs(ref.optimal_value));
        worst = std::max(worst, rel);
        if (rel > 1e-9) ++value_miss;
        if (!ref.optimal_actions.contains(sol.policy.at(1, root.k, root.l))) ++argmin_miss;
    }
    const double secs = seconds_since(start);
    out.require(value_miss == 0, fmt("%d value mismatches", value_miss));
    out.require(argmin_miss == 0, fmt("%d root actions outside the oracle argmin", argmin_miss));
    out.require(secs < 10.0, fmt("took %.2f s (limit 10 s)", secs));
    out.note(fmt("%d instances, worst relative error %.2e, %.2f s", trials, worst, secs));
    return out;
}

// 2. Threshold solver reproduces the general policy in the structured regime.
Outcome monotone_equivalence() {
    Outcome out;
    const auto start = Clock::now();
    Rng rng(777);
    const int trials = 100;
    int mismatched = 0;
    long points = 0;
    for (int i = 0; i < trials; ++i) {
        const auto base = testing::random_structured_instance(rng, {4, 12, 20}, true);
        const auto& spec0 = base.spec;
        const double b = testing::uniform(rng, 0.1, 5.0);
        const auto spec = ProblemSpec::create(spec0.steps() * spec0.sigma(), spec0.horizon(), spec0.sigma(),
                                              QuadraticPenalty{b}, spec0.initial_location())
                              .spec;
        const auto general = solve(base.model.network(), spec, SolveOptions{CostModel::Flat});
        const auto mono = solve_monotone(base.model, spec);
        bool ok = true;
        for (int t = 1; t <= spec.horizon(); ++t)
            for (int k = 0; k <= spec.steps(); ++k)
                for (int l = 1; l <= base.model.network().num_locations(); ++l) {
                    ++points;
                    const State s{k, LocationId{l}};
                    if (decide(mono.thresholds, s, t) != general.policy.at(t, k, s.l)) ok = false;
                }
        if (!ok) ++mismatched;
    }
    const double secs = seconds_since(start);
    out.require(mismatched == 0, fmt("%d instances disagree", mismatched));
    out.require(secs < 30.0, fmt("took %.2f s (limit 30 s)", secs));
    out.note(fmt("%d instances, %ld lattice points, %.2f s", trials, points, secs));
    return out;
}

std::string read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return {};
    std::string s;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;) s.append(buf, n);
    std::fclose(f);
    return s;
}

std::string map_csv(const PolicyMap& map) {
    std::ostringstream os;
    write_policy_map_csv(os, map);
    return os.str();
}

// 3. Single switch per column and monotone thresholds on the threshold config.
Outcome structure_suite() {
    Outcome out;
    const auto cfg = parse_config_file(kSourceDir + "/configs/threshold.cfg");
    const auto inst = first_instance(cfg);
    const auto sol = solve(inst.model, inst.spec, SolveOptions{cfg.cost_model});
    const int L = inst.model.num_locations(), T = inst.spec.horizon(), N = inst.spec.steps();

    int one = 0, none = 0, many = 0;
    for (int l = 1; l <= L; ++l) {
        const auto map = policy_map(sol.policy, LocationId{l});
        for (int t = 1; t <= T; ++t) {
            const int s = switches_along_k(map, t);
            (s == 0 ? none : s == 1 ? one : many) += 1;
        }
    }
    out.require(many == 0, fmt("%d columns with more than one switch", many));

    for (Property p : {Property::ThresholdK, Property::ThresholdMonotone}) {
        const auto r = verify_one(inst.model, inst.spec, sol, p, VerifyOptions{cfg.cost_model});
        out.require(r.status == CheckStatus::Pass, std::string(to_string(p)) + ": " + r.detail);
    }

    // k* and t* read directly off the policy.
    auto k_star = [&](int l, int t) {
        for (int k = 1; k <= N; ++k)
            if (sol.policy.at(t, k, LocationId{l}) == Action::Cellular) return k;
        return N + 1;
    };
    auto t_star = [&](int k, int l) {
        for (int t = 1; t <= T; ++t)
            if (sol.policy.at(t, k, LocationId{l}) == Action::Cellular) return t;
        return T + 1;
    };
    int k_bad = 0, t_bad = 0;
    for (int l = 1; l <= L; ++l) {
        for (int t = 2; t <= T; ++t) k_bad += k_star(l, t - 1) < k_star(l, t);
        for (int k = 1; k < N; ++k) t_bad += t_star(k, l) < t_star(k + 1, l);
    }
    out.require(k_bad == 0, fmt("k* increases in t at %d points", k_bad));
    out.require(t_bad == 0, fmt("t* increases in k at %d points", t_bad));

    for (int l : {1, 4}) {
        const auto golden = read_file(kSourceDir + "/tests/golden/policy_l" + std::to_string(l) + ".csv");
        out.require(!golden.empty() && golden == map_csv(policy_map(sol.policy, LocationId{l})),
                    fmt("policy map at l=%d differs from golden", l));
    }
    out.note(fmt("%d columns with one switch, %d entirely on the free action (threshold beyond K)", one, none));
    return out;
}

// 4. Value monotonicity, Wi-Fi dominance and the cross-difference conditions.
Outcome property_suite() {
    Outcome out;
    struct Case {
        std::string name;
        NetworkModel model;
        ProblemSpec spec;
        CostModel cost;
    };
    std::vector<Case> corpus;
    for (const char* name : {"threshold.cfg", "step_penalty.cfg"}) {
        const auto cfg = parse_config_file(kSourceDir + "/configs/" + name);
        auto inst = first_instance(cfg);
        corpus.push_back({name, std::move(inst.model), std::move(inst.spec), cfg.cost_model});
    }
    Rng rng(4711);
    for (int i = 0; i < 40; ++i) {
        auto inst = testing::random_general_instance(rng, {4, 8, 12});
        corpus.push_back({fmt("general#%d", i), std::move(inst.model), std::move(inst.spec), inst.cost});
    }
    for (int i = 0; i < 40; ++i) {
        auto inst = testing::random_structured_instance(rng, {4, 8, 12}, true);
        corpus.push_back({fmt("structured#%d", i), inst.model.network(), std::move(inst.spec), CostModel::Flat});
    }

    const std::vector<Property> props{Property::ValueMonotoneK, Property::ValueMonotoneT, Property::WifiDominance,
                                      Property::CrossDifference, Property::IncrementMonotone};
    std::vector<int> passed(props.size()), failed(props.size()), skipped(props.size());
    std::vector<std::string> first_failure(props.size());
    for (const auto& c : corpus) {
        const auto sol = solve(c.model, c.spec, SolveOptions{c.cost});
        const auto reports = verify(c.model, c.spec, sol, props, VerifyOptions{c.cost, 10000, 1, 1e-9});
        for (std::size_t i = 0; i < props.size(); ++i) {
            switch (reports[i].status) {
                case CheckStatus::Pass: ++passed[i]; break;
                case CheckStatus::Skipped: ++skipped[i]; break;
                case CheckStatus::Fail:
                    if (failed[i]++ == 0) first_failure[i] = c.name + " " + reports[i].detail;
                    break;
            }
        }
    }
    for (std::size_t i = 0; i < props.size(); ++i) {
        const std::string name(to_string(props[i]));
        out.require(failed[i] == 0, fmt("%s failed on %d instances, first: %s", name.c_str(), failed[i],
                                        first_failure[i].c_str()));
        out.note(fmt("%s %d pass / %d skipped", name.c_str(), passed[i], skipped[i]));
    }
    return out;
}

ScenarioConfig default_runs_config() {
    ScenarioConfig cfg;
    cfg.runs = 1000;
    cfg.seed = 1;
    return cfg;
}

const std::vector<double> kDeadlines{2.0, 3.0, 4.0, 5.0};

// 5 and 6 share one experiment.
const ExperimentResult& deadline_experiment() {
    static const ExperimentResult result =
        run_experiment(default_runs_config(), kAllSchemes, Sweep{SweepAxis::Deadline, kDeadlines}, jobs());
    return result;
}

Outcome completion_trend() {
    Outcome out;
    const auto start = Clock::now();
    const auto& res = deadline_experiment();
    const double secs = seconds_since(start);
    for (SchemeKind s : kAllSchemes) {
        std::string curve;
        for (std::size_t i = 0; i < kDeadlines.size(); ++i) {
            const double p = res.row(kDeadlines[i], s).metrics.completion.mean;
            curve += fmt("%s%.3f", i ? "," : "", p);
            if (i > 0) {
                const double prev = res.row(kDeadlines[i - 1], s).metrics.completion.mean;
                out.require(p >= prev, fmt("%s completion drops from D=%g to D=%g", std::string(to_string(s)).c_str(),
                                           kDeadlines[i - 1], kDeadlines[i]));
            }
        }
        out.note(std::string(to_string(s)) + " " + curve);
    }
    const double general2 = res.row(2.0, SchemeKind::General).metrics.completion.mean;
    const double otso2 = res.row(2.0, SchemeKind::Otso).metrics.completion.mean;
    out.require(general2 - otso2 >= 0.20, fmt("OTSO gap at D=2 is %.3f (need >= 0.20)", general2 - otso2));
    for (double d : kDeadlines) {
        const double g = res.row(d, SchemeKind::General).metrics.completion.mean;
        const double n = res.row(d, SchemeKind::NoOffload).metrics.completion.mean;
        out.require(std::abs(g - n) <= 0.03, fmt("general vs no-offload differ by %.3f at D=%g", std::abs(g - n), d));
    }
    out.require(secs < 300.0, fmt("took %.1f s (limit 300 s)", secs));
    out.note(fmt("%.1f s", secs));
    return out;
}

Outcome cost_dominance() {
    Outcome out;
    const auto& res = deadline_experiment();
    for (double d : kDeadlines) {
        const auto& general = res.row(d, SchemeKind::General);
        std::string line = fmt("D=%g general %.3f", d, general.metrics.total_cost.mean);
        for (SchemeKind s : kAllSchemes) {
            if (s == SchemeKind::General) continue;
            const auto& other = res.row(d, s);
            std::vector<double> diff(general.runs.size());
            for (std::size_t r = 0; r < diff.size(); ++r) diff[r] = other.runs[r].cost - general.runs[r].cost;
            const MeanCi ci = mean_ci(diff);
            const std::string name(to_string(s));
            out.require(general.metrics.total_cost.mean <= other.metrics.total_cost.mean,
                        fmt("D=%g %s mean cost below general", d, name.c_str()));
            out.require(ci.mean - ci.half_width > 0.0,
                        fmt("D=%g paired difference vs %s not significant (%.4f +- %.4f)", d, name.c_str(), ci.mean,
                            ci.half_width));
            line += fmt(" %s %.3f", name.c_str(), other.metrics.total_cost.mean);
        }
        out.note(line);
    }
    return out;
}

// 7. Payment ordering for a small file.
Outcome payment_trend() {
    Outcome out;
    auto cfg = default_runs_config();
    cfg.file_mbytes = 92.5;
    const std::vector<double> deadlines{3.0, 4.0, 5.0};
    const std::array schemes{SchemeKind::General, SchemeKind::Monotone, SchemeKind::Otso, SchemeKind::NoOffload};
    const auto res = run_experiment(cfg, schemes, Sweep{SweepAxis::Deadline, deadlines}, jobs());
    for (double d : deadlines) {
        const MeanCi g = res.row(d, SchemeKind::General).metrics.payment;
        const MeanCi m = res.row(d, SchemeKind::Monotone).metrics.payment;
        const double otso = res.row(d, SchemeKind::Otso).metrics.payment.mean;
        const double none = res.row(d, SchemeKind::NoOffload).metrics.payment.mean;
        const double gap = std::abs(g.mean - m.mean);
        out.require(gap <= g.half_width && gap <= m.half_width,
                    fmt("D=%g general %.4f+-%.4f and monotone %.4f+-%.4f outside each other's CI", d, g.mean,
                        g.half_width, m.mean, m.half_width));
        out.require(std::max(g.mean, m.mean) <= otso, fmt("D=%g optimal payments exceed OTSO", d));
        out.require(otso <= none, fmt("D=%g OTSO payment exceeds no-offload", d));
        out.note(fmt("D=%g general %.4f monotone %.4f otso %.4f no-offload %.4f", d, g.mean, m.mean, otso, none));
    }
    return out;
}

// 8. OTSO converges to the optimum as Wi-Fi gets faster.
Outcome otso_convergence() {
    Outcome out;
    auto cfg = default_runs_config();
    cfg.deadline_min = 1.0;
    cfg.file_mbytes = 625.0;
    const std::vector<double> rates{20.0, 60.0, 100.0, 140.0, 180.0};
    const std::array schemes{SchemeKind::General, SchemeKind::Otso};
    const auto res = run_experiment(cfg, schemes, Sweep{SweepAxis::WifiRate, rates}, jobs());
    double prev = 2.0;
    std::string curve;
    for (double mu : rates) {
        const double gap = std::abs(res.row(mu, SchemeKind::Otso).metrics.completion.mean -
                                    res.row(mu, SchemeKind::General).metrics.completion.mean);
        out.require(gap <= prev, fmt("gap grows at mu_w=%g", mu));
        prev = gap;
        curve += fmt(" mu_w=%g gap %.3f", mu, gap);
    }
    out.require(prev < 0.03, fmt("final gap %.3f (need < 0.03)", prev));
    out.note(curve.substr(1));
    return out;
}

// 9. Step penalty produces a column with several switches.
Outcome non_threshold() {
    Outcome out;
    const auto cfg = parse_config_file(kSourceDir + "/configs/step_penalty.cfg");
    const auto inst = first_instance(cfg);
    const auto sol = solve(inst.model, inst.spec, SolveOptions{cfg.cost_model});
    int multi = 0;
    std::string first;
    for (int l = 1; l <= inst.model.num_locations(); ++l) {
        const auto map = policy_map(sol.policy, LocationId{l});
        for (int t = 1; t <= inst.spec.horizon(); ++t)
            if (switches_along_k(map, t) > 1 && multi++ == 0) first = fmt("first at l=%d t=%d", l, t);
    }
    out.require(multi > 0, "every column has at most one switch");
    out.note(fmt("%d columns with several switches", multi) + (first.empty() ? "" : ", " + first));
    return out;
}

template <class F>
double best_time(F&& f, int reps) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto start = Clock::now();
        f();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

// 10. Runtime of both solvers on a large lattice.
Outcome complexity() {
    Outcome out;
    auto cfg = default_runs_config();
    cfg.deadline_min = 10.0;  // T = 60 slots
    const auto inst = first_instance(cfg);
    if (inst.spec.steps() != 600 || inst.spec.horizon() != 60 || inst.model.num_locations() != 16) {
        out.require(false, "unexpected lattice size");
        return out;
    }
    const auto mm = mean_rate_model(cfg, inst.model);
    double sink = 0.0;
    const double general = best_time([&] { sink += solve(inst.model, inst.spec).values.at(1, 600, LocationId{1}); }, 3);
    const double mono = best_time([&] { sink += solve_monotone(mm, inst.spec).values.at(1, 600, LocationId{1}); }, 3);
    const double ratio = general / mono;
    out.require(general < 5.0, fmt("general solve took %.3f s (limit 5 s)", general));
    out.require(ratio >= 5.0, fmt("monotone speedup %.2fx (need >= 5x)", ratio));
    out.note(fmt("general %.4f s, monotone %.4f s, ratio %.2f (checksum %.3g)", general, mono, ratio, sink));
    return out;
}

}  // namespace
}  // namespace offload

int main() {
    using namespace offload;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"monotone/general equivalence", monotone_equivalence},
        {"threshold structure", structure_suite},
        {"value and difference properties", property_suite},
        {"completion trend over deadline", completion_trend},
        {"cost dominance", cost_dominance},
        {"payment ordering", payment_trend},
        {"otso convergence in wifi rate", otso_convergence},
        {"multiple switches under step penalty", non_threshold},
        {"solver runtime", complexity},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
