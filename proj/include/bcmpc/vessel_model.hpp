#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/angles.hpp"
#include "bcmpc/velocity_trajectory.hpp"

namespace bcmpc {

struct VesselState {
    double position_north = 0.0;  // m
    double position_east = 0.0;   // m
    double sog = 0.0;             // m/s
    double course = 0.0;          // rad, clockwise from north, (-pi, pi]
    double course_rate = 0.0;     // rad/s
    double time = 0.0;            // s
};

struct AccelerationLimits {
    double sog_accel_max = 0.0;     // m/s^2
    double sog_accel_min = 0.0;     // m/s^2, negative
    double course_accel_max = 0.0;  // rad/s^2
    double course_accel_min = 0.0;  // rad/s^2, negative

    bool valid() const {
        return sog_accel_min < 0.0 && sog_accel_max > 0.0 && course_accel_min < 0.0 && course_accel_max > 0.0;
    }
};

/// value = base + slope * sog, then pushed away from zero by at least floor.
struct AffineLimit {
    double base = 0.0;
    double slope = 0.0;  // per m/s
    double floor = 0.0;  // minimum magnitude, > 0
};

struct PlantConfig {
    double sog_time_constant = 5.0;          // s
    double course_time_constant = 5.0;       // s
    double course_rate_time_constant = 0.5;  // s, rate loop lag
    double max_course_rate = 0.2;            // rad/s
    double step = 0.1;                       // s
    AffineLimit sog_accel_max{0.8, -0.04, 0.05};
    AffineLimit sog_accel_min{-1.0, 0.0, 0.05};
    AffineLimit course_accel_max{0.12, -0.004, 0.02};
    AffineLimit course_accel_min{-0.12, 0.004, 0.02};
};

inline std::vector<std::string> validate(const PlantConfig& cfg) {
    std::vector<std::string> out;
    if (!(cfg.sog_time_constant > 0.0)) out.push_back("plant.sog_time_constant_s must be > 0");
    if (!(cfg.course_time_constant > 0.0)) out.push_back("plant.course_time_constant_s must be > 0");
    if (!(cfg.course_rate_time_constant > 0.0)) out.push_back("plant.course_rate_time_constant_s must be > 0");
    if (!(cfg.max_course_rate > 0.0)) out.push_back("plant.max_course_rate_radps must be > 0");
    if (!(cfg.step > 0.0)) out.push_back("plant.step_s must be > 0");
    for (const auto* lim : {&cfg.sog_accel_max, &cfg.sog_accel_min, &cfg.course_accel_max, &cfg.course_accel_min})
        if (!(lim->floor > 0.0)) out.push_back("plant acceleration limit floor must be > 0");
    return out;
}

namespace detail {
inline double positive_limit(const AffineLimit& m, double sog) { return std::max(m.base + m.slope * sog, m.floor); }
inline double negative_limit(const AffineLimit& m, double sog) { return std::min(m.base + m.slope * sog, -m.floor); }
}  // namespace detail

inline AccelerationLimits acceleration_limits(const VesselState& state, const PlantConfig& cfg) {
    const double u = std::max(0.0, state.sog);
    return {detail::positive_limit(cfg.sog_accel_max, u), detail::negative_limit(cfg.sog_accel_min, u),
            detail::positive_limit(cfg.course_accel_max, u), detail::negative_limit(cfg.course_accel_min, u)};
}

/// Adds the decaying initial tracking error to a desired trajectory starting at state.time.
inline VelocityTrajectory feedback_correct(const VelocityTrajectory& desired, const VesselState& state,
                                           const PlantConfig& cfg) {
    VelocityTrajectory out = desired;
    const double t0 = state.time;
    out.correction.start_time = t0;
    out.correction.sog_time_constant = cfg.sog_time_constant;
    out.correction.course_time_constant = cfg.course_time_constant;
    out.correction.sog_error = state.sog - std::max(0.0, desired.sog_fn(t0));
    out.correction.course_error = wrap_to_pi(state.course - desired.course_fn(t0));
    return out;
}

/// One step of the simulated vessel with its speed and course autopilot.
inline VesselState step_plant(const VesselState& state, double desired_sog, double desired_course,
                              const PlantConfig& cfg, double dt) {
    if (!(dt > 0.0) || dt > cfg.step + 1e-12) throw std::invalid_argument("step_plant: dt must be in (0, plant step]");
    const AccelerationLimits lim = acceleration_limits(state, cfg);
    VesselState next = state;

    const double target_sog = std::max(0.0, desired_sog);
    double dsog = (target_sog - state.sog) * (1.0 - std::exp(-dt / cfg.sog_time_constant));
    dsog = std::clamp(dsog, lim.sog_accel_min * dt, lim.sog_accel_max * dt);
    next.sog = std::max(0.0, state.sog + dsog);

    const double course_error = wrap_to_pi(desired_course - state.course);
    const double rate_cmd = std::clamp(course_error / cfg.course_time_constant, -cfg.max_course_rate, cfg.max_course_rate);
    double drate = (rate_cmd - state.course_rate) * (1.0 - std::exp(-dt / cfg.course_rate_time_constant));
    drate = std::clamp(drate, lim.course_accel_min * dt, lim.course_accel_max * dt);
    next.course_rate = std::clamp(state.course_rate + drate, -cfg.max_course_rate, cfg.max_course_rate);

    const double course_unwrapped = state.course + 0.5 * (state.course_rate + next.course_rate) * dt;
    next.course = wrap_to_pi(course_unwrapped);

    const double mean_sog = 0.5 * (state.sog + next.sog);
    const double mean_course = 0.5 * (state.course + course_unwrapped);
    next.position_north += mean_sog * std::cos(mean_course) * dt;
    next.position_east += mean_sog * std::sin(mean_course) * dt;
    next.time = state.time + dt;
    return next;
}

}  // namespace bcmpc
