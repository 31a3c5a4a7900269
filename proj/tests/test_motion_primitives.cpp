#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bcmpc/motion_primitives.hpp"
#include "oracles.hpp"

using namespace bcmpc;

namespace {

PrimitiveConfig table_cfg() { return {20.0, 1.0, 5.0, 5.0, 5, 5}; }

AccelerationLimits unit_limits() { return {1.0, -1.0, 0.1, -0.1}; }

}  // namespace

TEST(PrimitiveConfig, RampConstraint) {
    EXPECT_TRUE(validate(table_cfg()).empty());
    PrimitiveConfig bad = table_cfg();
    bad.ramp_time = 2.0;  // 2 > 5/4
    EXPECT_FALSE(validate(bad).empty());
    bad = table_cfg();
    bad.sog_maneuver_time = 30.0;
    EXPECT_FALSE(validate(bad).empty());
}

TEST(SampleAccelerations, SingleSampleIsZero) {
    EXPECT_EQ(sample_accelerations(unit_limits(), 1, PrimitiveKind::sog), std::vector<double>{0.0});
}

TEST(SampleAccelerations, FiveSymmetric) {
    const auto s = sample_accelerations(unit_limits(), 5, PrimitiveKind::sog);
    const std::vector<double> expected{-1.0, -0.5, 0.0, 0.5, 1.0};
    ASSERT_EQ(s.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(s[i], expected[i], 1e-15);
}

TEST(SampleAccelerations, FourAsymmetricSnapsZero) {
    const AccelerationLimits lim{2.0, -1.0, 0.1, -0.1};
    const auto s = sample_accelerations(lim, 4, PrimitiveKind::sog);
    const std::vector<double> expected{-1.0, 0.0, 1.0, 2.0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s[i], expected[i], 1e-15);
}

TEST(SampleAccelerations, SnapsNearestWhenNoExactZero) {
    const AccelerationLimits lim{0.8, -1.0, 0.12, -0.1};
    for (std::size_t n = 2; n < 12; ++n) {
        for (auto kind : {PrimitiveKind::sog, PrimitiveKind::course}) {
            const auto s = sample_accelerations(lim, n, kind);
            EXPECT_EQ(std::count(s.begin(), s.end(), 0.0), 1);
            EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
        }
    }
    EXPECT_THROW(sample_accelerations(lim, 0, PrimitiveKind::sog), std::invalid_argument);
}

TEST(SpeedProfile, ShapeAndArea) {
    const auto cfg = table_cfg();
    const auto p = speed_profile(0.4, cfg);
    EXPECT_DOUBLE_EQ(p.value(0.0), 0.0);
    EXPECT_DOUBLE_EQ(p.value(0.5), 0.2);
    EXPECT_DOUBLE_EQ(p.value(3.0), 0.4);
    EXPECT_DOUBLE_EQ(p.value(5.0), 0.0);
    EXPECT_DOUBLE_EQ(p.value(7.0), 0.0);
    double area = 0.0;
    const double dt = 1e-4;
    for (double t = 0.0; t < 5.0; t += dt) area += 0.5 * dt * (p.value(t) + p.value(t + dt));
    EXPECT_NEAR(area, 0.4 * 4.0, 1e-6);
    const auto zero = speed_profile(0.0, cfg);
    for (double t = 0.0; t < 6.0; t += 0.25) EXPECT_EQ(zero.value(t), 0.0);
}

TEST(CourseProfile, AntisymmetricWithZeroIntegral) {
    const auto cfg = table_cfg();
    const auto p = course_profile(0.07, cfg);
    for (double t = 0.0; t <= 2.5; t += 0.01) EXPECT_NEAR(p.value(2.5 + t), -p.value(2.5 - t), 1e-15);
    const auto rate = integrate_course(0.0, 0.0, p, cfg, 20.0);
    EXPECT_NEAR(rate.derivative(2.5), 0.07 * 1.5, 1e-12);
    EXPECT_NEAR(rate.derivative(5.0), 0.0, 1e-12);
    EXPECT_NEAR(rate.derivative(12.0), 0.0, 1e-12);
}

TEST(IntegrateSpeed, Examples) {
    const auto cfg = table_cfg();
    const auto flat = integrate_speed(5.0, speed_profile(0.0, cfg), 20.0);
    for (double t = 0.0; t <= 20.0; t += 1.0) EXPECT_DOUBLE_EQ(flat(t), 5.0);
    EXPECT_NEAR(integrate_speed(5.0, speed_profile(0.5, cfg), 20.0).back_value(), 7.0, 1e-12);
    const auto stop = integrate_speed(5.0, speed_profile(-2.0, cfg), 20.0);
    EXPECT_DOUBLE_EQ(stop.back_value(), 0.0);
    for (double t = 0.0; t <= 20.0; t += 0.01) EXPECT_GE(stop(t), 0.0);
}

TEST(IntegrateSpeed, ConstantAfterManeuverAndOffsetStart) {
    const auto cfg = table_cfg();
    const auto u = integrate_speed(3.0, speed_profile(0.3, cfg), 20.0, 100.0);
    EXPECT_DOUBLE_EQ(u.start(), 100.0);
    EXPECT_DOUBLE_EQ(u.end(), 120.0);
    for (double t = 105.0; t <= 120.0; t += 0.5) EXPECT_NEAR(u(t), 3.0 + 0.3 * 4.0, 1e-12);
}

TEST(IntegrateCourse, InitialRateOnly) {
    const auto cfg = table_cfg();
    const auto c = integrate_course(0.2, 0.05, course_profile(0.0, cfg), cfg, 20.0);
    EXPECT_NEAR(c.back_value() - 0.2, 0.05 * cfg.ramp_time / 2.0, 1e-12);
    const auto z = integrate_course(0.2, 0.0, course_profile(0.0, cfg), cfg, 20.0);
    EXPECT_DOUBLE_EQ(z.back_value(), 0.2);
}

TEST(IntegrateCourse, MatchesQuadratureOracle) {
    const auto cfg = table_cfg();
    const double a = 0.09;
    const auto c = integrate_course(0.0, 0.0, course_profile(a, cfg), cfg, 20.0);
    const auto ref = oracle::integrate_course(0.0, 0.0, a, 1.0, 5.0, 20.0, 1e-4);
    for (std::size_t k = 0; k < ref.t.size(); k += 500) EXPECT_NEAR(c(ref.t[k]), ref.v[k], 1e-9);
    EXPECT_NEAR(unit_course_change(cfg), 3.75, 1e-12);
}

TEST(IntegratePrimitives, RandomConfigsAgainstOracle) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        PrimitiveConfig cfg;
        cfg.step_time = 10.0 + 20.0 * uni(rng);
        cfg.ramp_time = 0.1 + 1.4 * uni(rng);
        cfg.sog_maneuver_time = 2.0 * cfg.ramp_time + (cfg.step_time - 2.0 * cfg.ramp_time) * uni(rng);
        cfg.course_maneuver_time = 4.0 * cfg.ramp_time + (cfg.step_time - 4.0 * cfg.ramp_time) * uni(rng);
        ASSERT_TRUE(validate(cfg).empty());
        const double a_u = -2.0 + 4.0 * uni(rng), a_c = -2.0 + 4.0 * uni(rng);
        const double u0 = 10.0 * uni(rng), r0 = -0.2 + 0.4 * uni(rng);
        const auto u = integrate_speed(u0, speed_profile(a_u, cfg), cfg.step_time);
        const auto c = integrate_course(0.3, r0, course_profile(a_c, cfg), cfg, cfg.step_time);
        const auto ru = oracle::integrate_speed(u0, a_u, cfg.ramp_time, cfg.sog_maneuver_time, cfg.step_time, 1e-4);
        const auto rc = oracle::integrate_course(0.3, r0, a_c, cfg.ramp_time, cfg.course_maneuver_time, cfg.step_time, 1e-4);
        for (std::size_t k = 0; k < ru.t.size(); k += 97) {
            ASSERT_NEAR(u(ru.t[k]), ru.v[k], 1e-6) << "trial " << trial << " t " << ru.t[k];
            ASSERT_NEAR(c(rc.t[k]), rc.v[k], 1e-6) << "trial " << trial << " t " << rc.t[k];
        }
    }
}

TEST(Guidance, OnTrackGivesZero) {
    const auto cfg = table_cfg();
    const auto desired = DesiredTrajectory::from_path({{0.0, 0.0}, {5000.0, 0.0}}, 5.0);
    VesselState s;
    s.position_north = 500.0;
    s.sog = 5.0;
    s.time = 100.0;
    const auto g = guidance_acceleration(s, desired, cfg, unit_limits());
    EXPECT_NEAR(g.sog, 0.0, 1e-15);
    EXPECT_NEAR(g.course, 0.0, 1e-15);
}

TEST(Guidance, SpeedErrorIsClamped) {
    const auto cfg = table_cfg();
    const auto desired = DesiredTrajectory::from_path({{0.0, 0.0}, {5000.0, 0.0}}, 7.0);
    VesselState s;
    s.sog = 5.0;
    AccelerationLimits lim = unit_limits();
    EXPECT_NEAR(guidance_acceleration(s, desired, cfg, lim).sog, 2.0 / 5.0, 1e-12);
    lim.sog_accel_max = 0.3;
    EXPECT_DOUBLE_EQ(guidance_acceleration(s, desired, cfg, lim).sog, 0.3);
}

TEST(Guidance, SteersBackTowardTrack) {
    const auto cfg = table_cfg();
    const auto desired = DesiredTrajectory::from_path({{0.0, 0.0}, {5000.0, 0.0}}, 5.0);
    VesselState s;
    s.position_east = 60.0;  // east of a north-going path
    s.sog = 5.0;
    const auto g = guidance_acceleration(s, desired, cfg, unit_limits());
    EXPECT_LT(g.course, 0.0);
    // one maneuver later the course points west of north, reducing the east offset
    const auto chi = integrate_course(0.0, 0.0, course_profile(g.course, cfg), cfg, cfg.step_time);
    EXPECT_LT(std::sin(chi.back_value()), 0.0);
}

TEST(Guidance, KeepBandLimitsEachAxis) {
    auto cfg = table_cfg();
    const AccelerationLimits lim = unit_limits();
    const AccelPair limited = limit_to_keep_band({0.9, -0.09}, lim, cfg);
    EXPECT_LT(limited.sog, 0.25);
    EXPECT_GT(limited.course, -0.025);
    cfg.n_sog = 1;
    EXPECT_DOUBLE_EQ(limit_to_keep_band({0.9, 0.0}, lim, cfg).sog, 0.9);
}

TEST(ApplyGuidance, OutsideLimitsUnchanged) {
    const auto lim = unit_limits();
    const auto grid = make_grid(sample_accelerations(lim, 5, PrimitiveKind::sog), {0.0});
    EXPECT_EQ(apply_guidance(grid, {1.5, 0.0}, lim), grid);
}

TEST(ApplyGuidance, EqualToSampleUnchanged) {
    const auto lim = unit_limits();
    const auto grid = make_grid(sample_accelerations(lim, 5, PrimitiveKind::sog),
                                sample_accelerations(lim, 3, PrimitiveKind::course));
    EXPECT_EQ(apply_guidance(grid, {0.5, 0.1}, lim), grid);
}

TEST(ApplyGuidance, NearestSampleMoved) {
    const auto lim = unit_limits();
    const auto grid = make_grid({-1.0, -0.5, 0.0, 0.5, 1.0}, {0.0});
    const auto out = apply_guidance(grid, {0.3, 0.0}, lim);
    const std::vector<AccelPair> expected{{-1.0, 0.0}, {-0.5, 0.0}, {0.0, 0.0}, {0.3, 0.0}, {1.0, 0.0}};
    EXPECT_EQ(out, expected);
}

TEST(ApplyGuidance, ShiftsSamplesPerAxisInProductGrid) {
    const auto lim = unit_limits();
    const auto grid = make_grid({-1.0, 0.0, 1.0}, {-0.1, 0.0, 0.1});
    const auto out = apply_guidance(grid, {0.1, 0.01}, lim);
    int moved_sog = 0, moved_course = 0;
    for (const auto& p : out) {
        moved_sog += p.sog == 0.1;
        moved_course += p.course == 0.01;
        EXPECT_NE(p.sog, 0.0);
        EXPECT_NE(p.course, 0.0);
    }
    EXPECT_EQ(moved_sog, 3);
    EXPECT_EQ(moved_course, 3);
    EXPECT_THROW(apply_guidance({}, {0.0, 0.0}, lim), std::invalid_argument);
}
