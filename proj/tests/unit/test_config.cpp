#include <gtest/gtest.h>

#include "offload/config.hpp"

namespace offload {
namespace {

std::string parse_error_key(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.key();
    }
    return "<none>";
}

TEST(Config, EmptyTextGivesDefaults) {
    const auto cfg = parse_config("");
    EXPECT_EQ(cfg, ScenarioConfig{});
    EXPECT_EQ(cfg.locations(), 16);
    EXPECT_EQ(cfg.horizon(), 12);
    EXPECT_DOUBLE_EQ(cfg.file_mbit(), 6000.0);
    EXPECT_EQ(cfg.penalty, PenaltyFn(QuadraticPenalty{1.0}));
    EXPECT_EQ(cfg.cost_model, CostModel::Usage);
}

TEST(Config, HorizonFromDeadline) {
    EXPECT_EQ(parse_config("deadline_min = 2\nslot_seconds = 10").horizon(), 12);
    EXPECT_EQ(parse_config("deadline_min = 5").horizon(), 30);
    EXPECT_EQ(parse_config("deadline_min = 5\nhorizon_slots = 7").horizon(), 7);
}

TEST(Config, CommentsAndWhitespace) {
    const auto cfg = parse_config("# header\n  p_stay =  0.25   # trailing\n\n\tgrid_rows=2\r\n");
    EXPECT_DOUBLE_EQ(cfg.p_stay, 0.25);
    EXPECT_EQ(cfg.grid_rows, 2);
}

TEST(Config, ValidationErrors) {
    EXPECT_THROW(parse_config("p_stay = 1.5"), ValidationError);
    EXPECT_THROW(parse_config("wifi_prob = -0.1"), ValidationError);
    EXPECT_THROW(parse_config("deadline_min = 0.1"), ValidationError);
    EXPECT_THROW(parse_config("wifi_locations = 17"), ValidationError);
    EXPECT_THROW(parse_config("wifi_locations = 2,2"), ValidationError);
    EXPECT_THROW(parse_config("cellular_rates_mbps = 1,2,3"), ValidationError);
    EXPECT_THROW(parse_config("initial_location = 0"), ValidationError);
    EXPECT_THROW(parse_config("penalty = tabulated\npenalty_values = 1,2"), ValidationError);
    EXPECT_THROW(parse_config("penalty = tabulated\npenalty_values = 0,2,1"), ValidationError);
    EXPECT_THROW(parse_config("sigma_mbit = 0"), ValidationError);
}

TEST(Config, ParseErrorsNameTheKey) {
    EXPECT_EQ(parse_error_key("colour = blue"), "colour");
    EXPECT_EQ(parse_error_key("p_stay = high"), "p_stay");
    EXPECT_EQ(parse_error_key("runs = 2.5"), "runs");
    EXPECT_EQ(parse_error_key("penalty = cubic"), "penalty");
    EXPECT_EQ(parse_error_key("cost_model = monthly"), "cost_model");
    EXPECT_EQ(parse_error_key("runs = 3\nruns = 4"), "runs");
    EXPECT_EQ(parse_error_key("runs ="), "runs");
    EXPECT_EQ(parse_error_key("penalty = tabulated"), "penalty_values");
    EXPECT_EQ(parse_error_key("just words"), "");
}

TEST(Config, PenaltyKinds) {
    EXPECT_EQ(parse_config("penalty = step\npenalty_z = 50").penalty, PenaltyFn(StepPenalty{50.0}));
    EXPECT_EQ(parse_config("penalty_b = 10").penalty, PenaltyFn(QuadraticPenalty{10.0}));
    EXPECT_EQ(parse_config("penalty = tabulated\npenalty_values = 0, 1, 4").penalty,
              PenaltyFn(TabulatedPenalty{{0.0, 1.0, 4.0}}));
}

TEST(Config, RoundTrip) {
    ScenarioConfig cfg;
    cfg.grid_rows = 2;
    cfg.grid_cols = 3;
    cfg.p_stay = 0.1 + 0.2;
    cfg.mu_w_mbps = 1.0 / 3.0;
    cfg.penalty = TabulatedPenalty{{0.0, 0.5, 2.0}};
    cfg.cost_model = CostModel::Flat;
    cfg.seed = 18446744073709551615ull;
    cfg.horizon_slots = 9;
    cfg.wifi_locations = std::vector<LocationId>{};
    cfg.cellular_rates_mbps = std::vector<double>{1, 2, 3, 4, 5, 6.25};
    cfg.initial_location = LocationId{6};
    EXPECT_EQ(parse_config(serialize(cfg)), cfg);

    cfg.wifi_locations = std::vector<LocationId>{LocationId{1}, LocationId{5}};
    cfg.penalty = StepPenalty{7.0};
    EXPECT_EQ(parse_config(serialize(cfg)), cfg);
    EXPECT_EQ(parse_config(serialize(ScenarioConfig{})), ScenarioConfig{});
}

TEST(Config, NoneMeansNoWifi) {
    const auto cfg = parse_config("wifi_locations = none");
    ASSERT_TRUE(cfg.wifi_locations.has_value());
    EXPECT_TRUE(cfg.wifi_locations->empty());
}

TEST(Config, MissingFile) { EXPECT_THROW(parse_config_file("/nonexistent/offload.cfg"), ParseError); }

}  // namespace
}  // namespace offload
