#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bcmpc/angles.hpp"
#include "bcmpc/vessel_model.hpp"

using namespace bcmpc;

namespace {

VelocityTrajectory constant_velocity(double t0, double t1, double sog, double course) {
    VelocityTrajectory v;
    v.sog_fn = PiecewisePolynomial::constant(t0, t1, sog);
    v.course_fn = PiecewisePolynomial::constant(t0, t1, course);
    return v;
}

}  // namespace

TEST(Angles, WrapToPi) {
    EXPECT_DOUBLE_EQ(wrap_to_pi(0.0), 0.0);
    EXPECT_DOUBLE_EQ(wrap_to_pi(-kPi), kPi);
    EXPECT_DOUBLE_EQ(wrap_to_pi(kPi), kPi);
    EXPECT_NEAR(wrap_to_pi(3.0 * kPi / 2.0), -kPi / 2.0, 1e-12);
    EXPECT_NEAR(wrap_to_pi(-5.0 * kPi), kPi, 1e-12);
}

TEST(AccelerationLimits, ZeroSpeedGivesBaseValues) {
    const PlantConfig cfg;
    const auto lim = acceleration_limits(VesselState{}, cfg);
    EXPECT_DOUBLE_EQ(lim.sog_accel_max, cfg.sog_accel_max.base);
    EXPECT_DOUBLE_EQ(lim.sog_accel_min, cfg.sog_accel_min.base);
    EXPECT_DOUBLE_EQ(lim.course_accel_max, cfg.course_accel_max.base);
    EXPECT_DOUBLE_EQ(lim.course_accel_min, cfg.course_accel_min.base);
}

TEST(AccelerationLimits, AffineEvaluation) {
    PlantConfig cfg;
    cfg.sog_accel_max = {2.0, -0.1, 0.05};
    VesselState s;
    s.sog = 5.0;
    EXPECT_NEAR(acceleration_limits(s, cfg).sog_accel_max, 1.5, 1e-12);
}

TEST(AccelerationLimits, FloorAtHighSpeed) {
    const PlantConfig cfg;
    VesselState s;
    s.sog = 100.0;
    const auto lim = acceleration_limits(s, cfg);
    EXPECT_DOUBLE_EQ(lim.sog_accel_max, cfg.sog_accel_max.floor);
    EXPECT_DOUBLE_EQ(lim.course_accel_max, cfg.course_accel_max.floor);
    EXPECT_DOUBLE_EQ(lim.course_accel_min, -cfg.course_accel_min.floor);
    EXPECT_TRUE(lim.valid());
}

TEST(AccelerationLimits, ContinuousInSog) {
    const PlantConfig cfg;
    VesselState a, b;
    for (double u = 0.0; u < 40.0; u += 0.01) {
        a.sog = u;
        b.sog = u + 1e-7;
        const auto la = acceleration_limits(a, cfg), lb = acceleration_limits(b, cfg);
        EXPECT_NEAR(la.sog_accel_max, lb.sog_accel_max, 1e-6);
        EXPECT_NEAR(la.course_accel_min, lb.course_accel_min, 1e-6);
    }
}

TEST(FeedbackCorrect, ZeroErrorIsIdentity) {
    const PlantConfig cfg;
    const auto d = constant_velocity(0.0, 80.0, 5.0, 0.3);
    VesselState s;
    s.sog = 5.0;
    s.course = 0.3;
    const auto c = feedback_correct(d, s, cfg);
    for (double t = 0.0; t <= 80.0; t += 0.5) {
        EXPECT_DOUBLE_EQ(c.sog(t), d.sog(t));
        EXPECT_DOUBLE_EQ(c.course(t), d.course(t));
    }
}

TEST(FeedbackCorrect, SogErrorDecaysByEAfterOneTimeConstant) {
    const PlantConfig cfg;
    const auto d = constant_velocity(0.0, 80.0, 4.0, 0.0);
    VesselState s;
    s.sog = 5.0;
    const auto c = feedback_correct(d, s, cfg);
    EXPECT_NEAR(c.sog(5.0) - 4.0, std::exp(-1.0), 1e-12);
    EXPECT_NEAR(c.sog(5.0) - 4.0, 0.3679, 1e-4);
    for (double t = 0.0; t <= 80.0; t += 1.0)
        EXPECT_NEAR(std::abs(c.sog(t) - d.sog(t)), 1.0 * std::exp(-t / cfg.sog_time_constant), 1e-12);
}

TEST(FeedbackCorrect, CourseErrorIsWrapped) {
    const PlantConfig cfg;
    const auto d = constant_velocity(0.0, 80.0, 5.0, kPi - 0.05);
    VesselState s;
    s.sog = 5.0;
    s.course = -kPi + 0.05;  // 0.1 rad clockwise of the desired course across the seam
    const auto c = feedback_correct(d, s, cfg);
    EXPECT_NEAR(c.correction.course_error, 0.1, 1e-12);
    double prev = c.course(0.0);
    for (double t = 0.1; t <= 30.0; t += 0.1) {
        EXPECT_LT(std::abs(c.course(t) - prev), 0.01);
        prev = c.course(t);
    }
}

TEST(StepPlant, EquilibriumOnlyAdvancesTime) {
    const PlantConfig cfg;
    VesselState s;
    s.sog = 5.0;
    s.course = 0.4;
    const auto n = step_plant(s, 5.0, 0.4, cfg, 0.1);
    EXPECT_DOUBLE_EQ(n.sog, 5.0);
    EXPECT_DOUBLE_EQ(n.course, 0.4);
    EXPECT_DOUBLE_EQ(n.course_rate, 0.0);
    EXPECT_DOUBLE_EQ(n.time, 0.1);
}

TEST(StepPlant, FirstOrderSpeedStep) {
    PlantConfig cfg;
    cfg.sog_accel_max = {5.0, 0.0, 0.05};  // loose enough that the step does not saturate
    const auto n = step_plant(VesselState{}, 5.0, 0.0, cfg, 0.1);
    EXPECT_NEAR(n.sog, 5.0 * (1.0 - std::exp(-0.02)), 1e-12);
    const auto saturated = step_plant(VesselState{}, 5.0, 0.0, PlantConfig{}, 0.1);
    EXPECT_NEAR(saturated.sog, PlantConfig{}.sog_accel_max.base * 0.1, 1e-12);
}

TEST(StepPlant, CourseRateSaturates) {
    const PlantConfig cfg;
    VesselState s;
    s.sog = 5.0;
    for (int i = 0; i < 200; ++i) {
        s = step_plant(s, 5.0, 3.0, cfg, 0.1);
        EXPECT_LE(std::abs(s.course_rate), cfg.max_course_rate + 1e-12);
    }
}

TEST(StepPlant, RejectsBadStep) {
    const PlantConfig cfg;
    EXPECT_THROW(step_plant(VesselState{}, 1.0, 0.0, cfg, 0.0), std::invalid_argument);
    EXPECT_THROW(step_plant(VesselState{}, 1.0, 0.0, cfg, 0.2), std::invalid_argument);
}

TEST(StepPlant, InvariantsUnderRandomCommands) {
    const PlantConfig cfg;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> sog(-2.0, 12.0), course(-10.0, 10.0);
    VesselState s;
    for (int i = 0; i < 20000; ++i) {
        s = step_plant(s, sog(rng), course(rng), cfg, 0.1);
        ASSERT_GE(s.sog, 0.0);
        ASSERT_GT(s.course, -kPi);
        ASSERT_LE(s.course, kPi);
    }
}

TEST(StepPlant, ConvergesToConstantCommand) {
    const PlantConfig cfg;
    VesselState s;
    s.sog = 2.0;
    const double t_end = 10.0 * std::max(cfg.sog_time_constant, cfg.course_time_constant);
    for (double t = 0.0; t < t_end - 1e-9; t += 0.1) s = step_plant(s, 6.0, 0.5, cfg, 0.1);
    EXPECT_LT(std::abs(s.sog - 6.0), 0.01 * 4.0);
    EXPECT_LT(std::abs(wrap_to_pi(s.course - 0.5)), 0.01 * 0.5);
}

TEST(PlantConfig, ValidateDefaults) {
    EXPECT_TRUE(validate(PlantConfig{}).empty());
    PlantConfig bad;
    bad.sog_time_constant = 0.0;
    EXPECT_FALSE(validate(bad).empty());
}
