#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bcmpc/angles.hpp"
#include "bcmpc/sim_harness.hpp"

namespace bcmpc {

namespace detail {

inline StaticObstacle box(double north_lo, double north_hi, double east_lo, double east_hi, double padding) {
    return {{{north_lo, east_lo}, {north_lo, east_hi}, {north_hi, east_hi}, {north_hi, east_lo}}, padding};
}

inline Scenario straight_north(std::string name, double speed, double length, double duration) {
    Scenario s;
    s.name = std::move(name);
    s.ownship = {0.0, 0.0, speed, 0.0, 0.0, 0.0};
    s.desired = DesiredTrajectory::from_path({{0.0, 0.0}, {length, 0.0}}, speed);
    s.duration = duration;
    return s;
}

}  // namespace detail

/// Two static obstacles astride the desired line.
inline Scenario scenario_static_only() {
    Scenario s = detail::straight_north("scenario-1", 5.0, 5000.0, 900.0);
    s.static_obstacles = {detail::box(1000.0, 1250.0, -250.0, 150.0, 150.0),
                          detail::box(1800.0, 2050.0, -100.0, 300.0, 150.0)};
    return s;
}

/// Head-on encounter at the entry of a narrow channel; 50 m padding.
inline Scenario scenario_head_on() {
    Scenario s = detail::straight_north("scenario-2", 5.0, 5000.0, 700.0);
    s.static_obstacles = {detail::box(700.0, 1300.0, -500.0, -250.0, 50.0),   // blocks an early port turn
                          detail::box(1350.0, 1500.0, -120.0, 40.0, 50.0),    // first obstacle, passed to the east
                          detail::box(1900.0, 2300.0, -300.0, -90.0, 50.0),   // channel, west side
                          detail::box(1900.0, 2300.0, 90.0, 300.0, 50.0)};    // channel, east side
    s.moving_obstacles = {{1, {2000.0, 0.0}, 5.0 * kKnotToMps, kPi}};
    return s;
}

/// Obstacle crossing from starboard; a static obstacle blocks an early starboard turn.
inline Scenario scenario_crossing() {
    Scenario s = detail::straight_north("scenario-3", 5.0, 5000.0, 600.0);
    const double obstacle_sog = 5.0 * kKnotToMps;
    const double obstacle_course = deg_to_rad(-75.0);
    s.static_obstacles = {detail::box(300.0, 650.0, 80.0, 280.0, 100.0)};
    // on a collision course with the ownship at (1000, 0) after 200 s
    const Position start{1000.0 - 200.0 * obstacle_sog * std::cos(obstacle_course),
                         -200.0 * obstacle_sog * std::sin(obstacle_course)};
    s.moving_obstacles = {{1, start, obstacle_sog, obstacle_course}};
    return s;
}

/// Overtaking at 8 m/s with a static obstacle on the overtaken vessel's port side.
inline Scenario scenario_overtaking() {
    Scenario s = detail::straight_north("scenario-4", 8.0, 8000.0, 500.0);
    s.static_obstacles = {detail::box(900.0, 2400.0, -450.0, -200.0, 150.0)};
    s.moving_obstacles = {{1, {900.0, 0.0}, 5.0 * kKnotToMps, 0.0}};
    return s;
}

inline std::vector<Scenario> builtin_scenarios() {
    return {scenario_static_only(), scenario_head_on(), scenario_crossing(), scenario_overtaking()};
}

/// Looks up a built-in scenario by name ("scenario-1".."scenario-4") or alias.
inline std::optional<Scenario> builtin_scenario(const std::string& name) {
    if (name == "scenario-1" || name == "static-only") return scenario_static_only();
    if (name == "scenario-2" || name == "head-on") return scenario_head_on();
    if (name == "scenario-3" || name == "crossing") return scenario_crossing();
    if (name == "scenario-4" || name == "overtaking") return scenario_overtaking();
    return std::nullopt;
}

}  // namespace bcmpc
