#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "bcmpc/run_log_io.hpp"
#include "bcmpc/scenarios.hpp"
#include "bcmpc/sim_harness.hpp"

using namespace bcmpc;

namespace {

Scenario empty_world(double duration) {
    Scenario s = detail::straight_north("empty", 5.0, 5000.0, duration);
    return s;
}

}  // namespace

TEST(BuiltinScenarios, Catalog) {
    const auto all = builtin_scenarios();
    ASSERT_EQ(all.size(), 4u);
    for (const auto& s : all) EXPECT_TRUE(validate(s).empty()) << s.name;
    const auto s1 = *builtin_scenario("scenario-1");
    EXPECT_TRUE(s1.moving_obstacles.empty());
    EXPECT_EQ(s1.static_obstacles.size(), 2u);
    for (const auto& o : s1.static_obstacles) EXPECT_EQ(o.padding, 150.0);
    const auto s2 = *builtin_scenario("head-on");
    EXPECT_NEAR(s2.moving_obstacles.at(0).sog, 2.57, 0.005);
    for (const auto& o : s2.static_obstacles) EXPECT_EQ(o.padding, 50.0);
    EXPECT_DOUBLE_EQ((*builtin_scenario("scenario-4")).desired.speed(0.0), 8.0);
    EXPECT_DOUBLE_EQ((*builtin_scenario("scenario-3")).desired.speed(0.0), 5.0);
    EXPECT_FALSE(builtin_scenario("scenario-9").has_value());
}

TEST(RunClosedLoop, ZeroDurationHasInitialRecordOnly) {
    const auto log = run_closed_loop(empty_world(0.0), PlannerConfig{}, PlantConfig{});
    ASSERT_EQ(log.states.size(), 1u);
    EXPECT_TRUE(log.planner.empty());
    EXPECT_DOUBLE_EQ(log.states[0].time, 0.0);
}

TEST(RunClosedLoop, EmptyWorldStaysOnTrack) {
    const Scenario s = empty_world(300.0);
    const auto log = run_closed_loop(s, PlannerConfig{}, PlantConfig{});
    for (const auto& r : log.states)
        ASSERT_LT(s.desired.cross_track_distance({r.state.position_north, r.state.position_east}), 5.0) << r.time;
}

TEST(RunClosedLoop, RecordStructure) {
    Scenario s = *builtin_scenario("scenario-2");
    s.duration = 40.0;
    const auto log = run_closed_loop(s, PlannerConfig{}, PlantConfig{});
    ASSERT_EQ(log.states.size(), 401u);
    for (std::size_t k = 1; k < log.states.size(); ++k) ASSERT_GT(log.states[k].time, log.states[k - 1].time);
    ASSERT_EQ(log.planner.size(), 8u);
    for (std::size_t i = 0; i < log.planner.size(); ++i) {
        EXPECT_NEAR(log.planner[i].time, 5.0 * static_cast<double>(i), 1e-9);
        EXPECT_EQ(log.planner[i].candidate_count, 225u);
    }
    EXPECT_EQ(log.obstacles.size(), 17u);  // estimates every 2.5 s including t = 0 and t = 40
    for (const auto& r : log.states) EXPECT_EQ(r.obstacle_distances.size(), 1u);
}

TEST(RunClosedLoop, DesiredVelocityContinuousAtSwitches) {
    Scenario s = *builtin_scenario("scenario-3");
    s.duration = 200.0;
    const auto log = run_closed_loop(s, PlannerConfig{}, PlantConfig{});
    for (std::size_t k = 51; k < log.states.size(); k += 50) {
        EXPECT_LT(std::abs(log.states[k].desired_sog - log.states[k - 1].desired_sog), 0.05);
        EXPECT_LT(std::abs(wrap_to_pi(log.states[k].desired_course - log.states[k - 1].desired_course)), 0.02);
    }
}

TEST(RunClosedLoop, DeterministicForFixedSeed) {
    Scenario s = *builtin_scenario("scenario-4");
    s.duration = 60.0;
    std::ostringstream a, b;
    write_csv(a, run_closed_loop(s, PlannerConfig{}, PlantConfig{}));
    write_csv(b, run_closed_loop(s, PlannerConfig{}, PlantConfig{}));
    EXPECT_EQ(a.str(), b.str());
    const auto first = run_closed_loop(s, PlannerConfig{}, PlantConfig{});
    s.seed = 99;
    const auto other = run_closed_loop(s, PlannerConfig{}, PlantConfig{});
    ASSERT_EQ(first.obstacles.size(), other.obstacles.size());
    EXPECT_NE(first.obstacles[3].estimate.position.north, other.obstacles[3].estimate.position.north);
    EXPECT_EQ(first.obstacles[3].truth.position.north, other.obstacles[3].truth.position.north);
}

TEST(RunClosedLoop, RejectsPlantStepAbovePlantConfig) {
    SimConfig sim;
    sim.plant_step = 0.5;
    EXPECT_THROW(run_closed_loop(empty_world(10.0), PlannerConfig{}, PlantConfig{}, sim), std::invalid_argument);
}

TEST(Metrics, StraightPassAbeamOfStationaryObstacle) {
    Scenario s = empty_world(200.0);
    s.moving_obstacles = {{1, {500.0, 100.0}, 0.0, 0.0}};
    RunLog log;
    for (int k = 0; k <= 2000; ++k) {
        StateRecord r;
        r.time = 0.1 * k;
        r.state.position_north = 0.5 * k;  // 5 m/s north
        r.state.sog = 5.0;
        log.states.push_back(r);
    }
    const auto m = compute_metrics(log, s);
    ASSERT_EQ(m.moving_min_distance.size(), 1u);
    EXPECT_NEAR(m.moving_min_distance[0].second, 100.0, 1e-9);
    EXPECT_EQ(m.region_entries.collision, 0);
    EXPECT_EQ(m.region_entries.safety, 0);
    EXPECT_EQ(m.region_entries.margin, 1);  // stationary obstacle: circle of radius 125
    EXPECT_NEAR(m.cross_track.max, 0.0, 1e-9);
}

TEST(Metrics, SingleSampleAndEmptyLog) {
    Scenario s = empty_world(10.0);
    s.static_obstacles = {detail::box(100.0, 200.0, -50.0, 50.0, 150.0)};
    RunLog log;
    StateRecord r;
    r.state.position_north = 40.0;
    r.state.position_east = 30.0;
    log.states.push_back(r);
    const auto m = compute_metrics(log, s);
    EXPECT_NEAR(m.static_min_distance.at(0), 60.0, 1e-9);
    EXPECT_NEAR(m.cross_track.final, 30.0, 1e-9);
    EXPECT_FALSE(m.polygon_incursion);
    EXPECT_GT(m.max_static_cell_value, 0.0);
    EXPECT_THROW(compute_metrics(RunLog{}, s), std::invalid_argument);
}

TEST(RunLogIo, CsvColumns) {
    Scenario s = *builtin_scenario("scenario-2");
    s.duration = 1.0;
    const auto log = run_closed_loop(s, PlannerConfig{}, PlantConfig{});
    std::ostringstream os;
    write_csv(os, log);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "time_s,north_m,east_m,sog_mps,course_rad,desired_sog_mps,desired_course_rad,dist_obstacle_1_m");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    }
    EXPECT_EQ(rows, 11u);
}

TEST(RunLogIo, MetricsJsonForStaticOnly) {
    Scenario s = *builtin_scenario("scenario-1");
    s.duration = 20.0;
    const auto log = run_closed_loop(s, PlannerConfig{}, PlantConfig{});
    const auto j = metrics_json(log, compute_metrics(log, s));
    EXPECT_TRUE(j.at("moving_obstacles").empty());
    EXPECT_EQ(j.at("static_obstacles").size(), 2u);
    EXPECT_EQ(j.at("iterations").size(), 4u);
    EXPECT_TRUE(j.at("iterations")[0].at("cost").contains("transitional_course"));
}
