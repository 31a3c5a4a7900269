#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bcmpc/cost_model.hpp"
#include "bcmpc/desired_trajectory.hpp"
#include "bcmpc/planner.hpp"
#include "bcmpc/vessel_model.hpp"
#include "bcmpc/world_model.hpp"

namespace bcmpc {

/// Moving obstacle held at constant speed and course.
struct MovingObstacleScript {
    int id = 1;
    Position initial;
    double sog = 0.0;     // m/s
    double course = 0.0;  // rad

    ObstacleEstimate truth_at(double t) const {
        return ObstacleEstimate::from_sog_course(
            id, {initial.north + sog * std::cos(course) * t, initial.east + sog * std::sin(course) * t}, sog, course, t);
    }
};

struct NoiseConfig {
    double position_sigma = 10.0;  // m
    double velocity_sigma = 0.5;   // m/s
};

struct Scenario {
    std::string name;
    VesselState ownship;
    DesiredTrajectory desired;
    std::vector<StaticObstacle> static_obstacles;
    std::vector<MovingObstacleScript> moving_obstacles;
    NoiseConfig noise{};
    double duration = 600.0;  // s
    std::uint64_t seed = 1;
};

inline std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> out;
    if (!(s.duration >= 0.0)) out.push_back("scenario: duration must be >= 0");
    if (s.desired.waypoints().size() < 2) out.push_back("scenario: desired trajectory needs two waypoints");
    else if (!(s.desired.speed(0.0) > 0.0)) out.push_back("scenario: desired speed must be > 0");
    if (s.ownship.sog < 0.0) out.push_back("scenario: ownship sog must be >= 0");
    if (s.noise.position_sigma < 0.0 || s.noise.velocity_sigma < 0.0) out.push_back("scenario: noise sigma must be >= 0");
    for (const auto& o : s.static_obstacles) {
        try {
            check_polygon(o);
        } catch (const std::invalid_argument& e) {
            out.push_back(e.what());
        }
    }
    return out;
}

struct SimConfig {
    double plant_step = 0.1;        // s
    double estimate_period = 2.5;   // s
    double estimate_latency = 0.0;  // s
    double grid_resolution = 5.0;   // m
};

inline std::vector<std::string> validate(const SimConfig& c) {
    std::vector<std::string> out;
    if (!(c.plant_step > 0.0)) out.push_back("sim.plant_step_s must be > 0");
    if (!(c.estimate_period > 0.0)) out.push_back("sim.estimate_period_s must be > 0");
    if (!(c.estimate_latency >= 0.0)) out.push_back("sim.estimate_latency_s must be >= 0");
    if (!(c.grid_resolution > 0.0)) out.push_back("grid.resolution_m must be > 0");
    return out;
}

struct StateRecord {
    double time = 0.0;
    VesselState state;
    double desired_sog = 0.0;
    double desired_course = 0.0;             // rad, wrapped
    std::vector<double> obstacle_distances;  // m, per moving obstacle in scenario order
};

struct PlannerRecord {
    double time = 0.0;
    std::size_t index = 0;
    std::size_t candidate_count = 0;
    std::vector<std::size_t> leaf_path;
    AccelPair first_acceleration;
    double first_course_change = 0.0;  // rad, desired course change over the first level
    CostBreakdown breakdown;
    TransitionalCost transitional;
    double wall_time_ms = 0.0;
};

struct ObstacleRecord {
    double time = 0.0;
    ObstacleEstimate truth;
    ObstacleEstimate estimate;
};

struct RunLog {
    std::string scenario;
    std::vector<int> obstacle_ids;
    std::vector<StateRecord> states;
    std::vector<PlannerRecord> planner;
    std::vector<ObstacleRecord> obstacles;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

inline OccupancyGrid build_grid(const Scenario& scenario, double resolution) {
    if (scenario.static_obstacles.empty()) return OccupancyGrid{};
    return rasterize_and_pad(scenario.static_obstacles, resolution, bounds_for(scenario.static_obstacles, resolution));
}

/// Closed loop: plant at the plant step, obstacle estimates at the estimate period, planner at its period.
inline RunLog run_closed_loop(const Scenario& scenario, const PlannerConfig& planner_cfg, const PlantConfig& plant_cfg,
                              const SimConfig& sim = {}) {
    const double dt = sim.plant_step;
    if (!(dt > 0.0) || dt > plant_cfg.step + 1e-12) throw std::invalid_argument("run_closed_loop: invalid plant step");
    const auto n_steps = static_cast<std::size_t>(std::llround(scenario.duration / dt));
    const auto plan_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(planner_cfg.period / dt)));
    const auto estimate_every =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sim.estimate_period / dt)));

    const OccupancyGrid grid = build_grid(scenario, sim.grid_resolution);
    Planner planner(planner_cfg, plant_cfg);

    RunLog log;
    log.scenario = scenario.name;
    for (const auto& m : scenario.moving_obstacles) log.obstacle_ids.push_back(m.id);
    log.states.reserve(n_steps + 1);

    VesselState state = scenario.ownship;
    state.time = 0.0;
    state.course = wrap_to_pi(state.course);
    std::optional<VelocityTrajectory> active;
    std::vector<ObstacleEstimate> estimates;

    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        state.time = t;

        if (k % estimate_every == 0 && !scenario.moving_obstacles.empty()) {
            estimates.clear();
            const double measured_at = std::max(0.0, t - sim.estimate_latency);
            for (const auto& m : scenario.moving_obstacles) {
                const ObstacleEstimate truth = m.truth_at(measured_at);
                const std::uint64_t seed = detail::splitmix64(
                    scenario.seed ^ detail::splitmix64(static_cast<std::uint64_t>(m.id) * 0x100000001b3ULL + k));
                const ObstacleEstimate est =
                    inject_noise(truth, scenario.noise.position_sigma, scenario.noise.velocity_sigma, seed);
                estimates.push_back(est);
                log.obstacles.push_back({t, truth, est});
            }
        }

        if (k < n_steps && k % plan_every == 0) {
            PlanResult res = planner.plan(state, scenario.desired, estimates, grid.empty() ? nullptr : &grid);
            PlannerRecord rec;
            rec.time = t;
            rec.index = res.index;
            rec.candidate_count = res.candidate_count;
            rec.leaf_path = res.selected.leaf_path;
            rec.first_acceleration = res.selected.accelerations.front();
            const double t1 = t + planner_cfg.tree.step_times.front();
            rec.first_course_change = res.selected.desired.course_fn(t1) - res.selected.desired.course_fn(t);
            rec.breakdown = res.breakdown;
            rec.transitional = res.transitional;
            rec.wall_time_ms = res.wall_time_ms;
            log.planner.push_back(std::move(rec));
            active = std::move(res.selected.desired);
        }

        StateRecord row;
        row.time = t;
        row.state = state;
        if (active) {
            row.desired_sog = std::max(0.0, active->sog_fn(t));
            row.desired_course = wrap_to_pi(active->course_fn(t));
        } else {
            row.desired_sog = state.sog;
            row.desired_course = state.course;
        }
        for (const auto& m : scenario.moving_obstacles)
            row.obstacle_distances.push_back(distance({state.position_north, state.position_east}, m.truth_at(t).position));
        log.states.push_back(row);

        if (k < n_steps) state = step_plant(state, row.desired_sog, row.desired_course, plant_cfg, dt);
    }
    return log;
}

struct RegionEntries {
    int collision = 0;
    int safety = 0;
    int margin = 0;
};

struct CrossTrackStats {
    double mean = 0.0;
    double rms = 0.0;
    double max = 0.0;
    double final = 0.0;
};

struct Metrics {
    std::vector<double> static_min_distance;                // m, per static obstacle, to the true polygon
    std::vector<std::pair<int, double>> moving_min_distance;  // (id, m)
    CrossTrackStats cross_track;
    RegionEntries region_entries;
    double max_static_cell_value = 0.0;  // largest grid value occupied by the ownship
    bool polygon_incursion = false;
};

/// Table-3-style summary computed against true geometry.
inline Metrics compute_metrics(const RunLog& log, const Scenario& scenario, const ObstacleRegions& regions = {},
                               double grid_resolution = 5.0) {
    if (log.states.empty()) throw std::invalid_argument("compute_metrics: empty log");
    Metrics m;
    const OccupancyGrid grid = build_grid(scenario, grid_resolution);
    m.static_min_distance.assign(scenario.static_obstacles.size(), std::numeric_limits<double>::infinity());
    for (const auto& mo : scenario.moving_obstacles)
        m.moving_min_distance.emplace_back(mo.id, std::numeric_limits<double>::infinity());
    std::vector<std::array<bool, 3>> inside(scenario.moving_obstacles.size(), {false, false, false});

    double sum = 0.0, sum2 = 0.0;
    for (const auto& rec : log.states) {
        const Position p{rec.state.position_north, rec.state.position_east};
        for (std::size_t i = 0; i < scenario.static_obstacles.size(); ++i) {
            const double d = distance_to_polygon(p, scenario.static_obstacles[i].polygon);
            m.static_min_distance[i] = std::min(m.static_min_distance[i], d);
            if (d == 0.0) m.polygon_incursion = true;
        }
        m.max_static_cell_value = std::max(m.max_static_cell_value, grid.query(p));
        for (std::size_t j = 0; j < scenario.moving_obstacles.size(); ++j) {
            const ObstacleEstimate truth = scenario.moving_obstacles[j].truth_at(rec.time);
            m.moving_min_distance[j].second = std::min(m.moving_min_distance[j].second, distance(p, truth.position));
            const int level = region_level(p, predict_obstacle(truth, rec.time), regions);
            for (int i = 0; i < 3; ++i) {
                const bool now = level <= i;
                auto& was = inside[j][static_cast<std::size_t>(i)];
                if (now && !was) {
                    if (i == 0) ++m.region_entries.collision;
                    if (i == 1) ++m.region_entries.safety;
                    if (i == 2) ++m.region_entries.margin;
                }
                was = now;
            }
        }
        const double xte = scenario.desired.cross_track_distance(p);
        sum += xte;
        sum2 += xte * xte;
        m.cross_track.max = std::max(m.cross_track.max, xte);
        m.cross_track.final = xte;
    }
    const auto n = static_cast<double>(log.states.size());
    m.cross_track.mean = sum / n;
    m.cross_track.rms = std::sqrt(sum2 / n);
    return m;
}

}  // namespace bcmpc
