#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "offload/config.hpp"
#include "offload/io.hpp"

namespace offload {
namespace {

const std::string kSourceDir = OFFLOAD_SOURCE_DIR;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    EXPECT_TRUE(in) << path;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Instance threshold_instance() {
    const auto cfg = parse_config_file(kSourceDir + "/configs/threshold.cfg");
    Rng rng = make_stream(cfg.seed, {0, 0});
    return sample_instance(cfg, rng);
}

template <class Writer>
std::string render(Writer&& w) {
    std::ostringstream os;
    w(os);
    return os.str();
}

TEST(Golden, ThresholdConfigPolicyMaps) {
    const auto inst = threshold_instance();
    const auto sol = solve(inst.model, inst.spec, SolveOptions{CostModel::Flat});
    for (int l : {1, 4}) {
        const auto text = render([&](std::ostream& os) { write_policy_map_csv(os, policy_map(sol.policy, LocationId{l})); });
        EXPECT_EQ(text, read_file(kSourceDir + "/tests/golden/policy_l" + std::to_string(l) + ".csv")) << "l=" << l;
    }
}

TEST(Golden, ThresholdConfigThresholds) {
    const auto inst = threshold_instance();
    const auto sol = solve_monotone(MonotoneModel::from_network(inst.model), inst.spec);
    const auto text = render([&](std::ostream& os) { write_thresholds_csv(os, sol.thresholds); });
    EXPECT_EQ(text, read_file(kSourceDir + "/tests/golden/thresholds.csv"));
}

TEST(PolicyMap, SolversAgreeOnThresholdConfig) {
    const auto inst = threshold_instance();
    const auto general = solve(inst.model, inst.spec, SolveOptions{CostModel::Flat});
    const auto mono = solve_monotone(MonotoneModel::from_network(inst.model), inst.spec);
    for (int l = 1; l <= inst.model.num_locations(); ++l)
        EXPECT_EQ(policy_map(general.policy, LocationId{l}), policy_map(mono.thresholds, LocationId{l}));
}

TEST(PolicyMap, SwitchCount) {
    const PolicyMap map{{0, 0, 1, 1, 0}, {0, 2, 2, 2, 2}, {0, 1, 1, 1, 1}};
    EXPECT_EQ(switches_along_k(map, 1), 2);
    EXPECT_EQ(switches_along_k(map, 2), 0);
    EXPECT_EQ(switches_along_k(map, 3), 0);
}

TEST(PolicyMap, EmptyFileIsAllIdle) {
    NetworkModel::Params p{1, {}, {1.0}, {1.0}, {0.0}, {1.0}, {0.0}};
    const NetworkModel m(p);
    const auto spec = ProblemSpec::create(0.0, 3, 1.0, QuadraticPenalty{1.0}).spec;
    const auto map = policy_map(solve(m, spec).policy, LocationId{1});
    EXPECT_EQ(map, (PolicyMap{{0}, {0}, {0}}));
    EXPECT_EQ(render([&](std::ostream& os) { write_policy_map_csv(os, map); }), "t,0\n1,0\n2,0\n3,0\n");
}

// One location, cellular only, K = 1, T = 1.
TEST(Csv, PolicyAndValues) {
    NetworkModel::Params p{1, {}, {1.0}, {0.5}, {0.0}, {1.0}, {0.0}};
    const NetworkModel m(p);
    const auto spec = ProblemSpec::create(1.0, 1, 1.0, QuadraticPenalty{10.0}).spec;
    const auto sol = solve(m, spec);
    EXPECT_EQ(render([&](std::ostream& os) { write_policy_csv(os, sol.policy); }), "t,k,l,action\n1,0,1,0\n1,1,1,1\n");
    EXPECT_EQ(render([&](std::ostream& os) { write_values_csv(os, sol.values); }),
              "t,k,l,value\n1,0,1,0\n1,1,1,0.5\n2,0,1,0\n2,1,1,10\n");
}

TEST(Experiment, CsvAndJson) {
    ScenarioConfig cfg;
    cfg.grid_rows = 1;
    cfg.grid_cols = 2;
    cfg.file_mbytes = 5.0;
    cfg.deadline_min = 1.0;
    cfg.runs = 3;
    const std::array schemes{SchemeKind::NoOffload, SchemeKind::Otso};
    const auto res = run_experiment(cfg, schemes, Sweep{SweepAxis::Deadline, {0.5, 1.0}});
    const auto csv = render([&](std::ostream& os) { write_experiment_csv(os, res); });
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header,
              "sweep_value,scheme,completion_prob,completion_ci,mean_cost,cost_ci,mean_payment,payment_ci,"
              "slots_cellular,slots_wifi,slots_waiting");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    EXPECT_EQ(rows, 4);

    const auto j = experiment_json(res);
    EXPECT_EQ(j.at("sweep_axis"), "deadline");
    EXPECT_EQ(j.at("runs"), 3);
    EXPECT_EQ(j.at("rows").size(), 4u);
    EXPECT_EQ(j.at("rows")[1].at("scheme"), "otso");
    EXPECT_EQ(j.at("config").at("grid_cols"), "2");
    EXPECT_EQ(j.at("run_model").at("initial_location"), "uniform");
}

TEST(WriteOutput, FailsOnBadPath) {
    EXPECT_THROW(write_output("/nonexistent-dir/x.csv", "a"), ValidationError);
}

}  // namespace
}  // namespace offload
