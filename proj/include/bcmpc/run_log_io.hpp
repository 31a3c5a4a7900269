#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bcmpc/sim_harness.hpp"

namespace bcmpc {

/// Fixed CSV columns; one distance column per moving obstacle, in scenario order.
inline std::vector<std::string> csv_columns(const RunLog& log) {
    std::vector<std::string> cols{"time_s",  "north_m",         "east_m",
                                  "sog_mps", "course_rad",      "desired_sog_mps",
                                  "desired_course_rad"};
    for (int id : log.obstacle_ids) cols.push_back("dist_obstacle_" + std::to_string(id) + "_m");
    return cols;
}

inline void write_csv(std::ostream& os, const RunLog& log) {
    const auto cols = csv_columns(log);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    char buf[64];
    auto put = [&](double v, const char* fmt) {
        std::snprintf(buf, sizeof buf, fmt, v);
        os << ',' << buf;
    };
    for (const auto& r : log.states) {
        std::snprintf(buf, sizeof buf, "%.1f", r.time);
        os << buf;
        put(r.state.position_north, "%.4f");
        put(r.state.position_east, "%.4f");
        put(r.state.sog, "%.5f");
        put(r.state.course, "%.6f");
        put(r.desired_sog, "%.5f");
        put(r.desired_course, "%.6f");
        for (double d : r.obstacle_distances) put(d, "%.4f");
        os << '\n';
    }
}

inline nlohmann::json breakdown_json(const CostBreakdown& b) {
    return {{"align", b.align},
            {"avoid_moving", b.avoid_moving},
            {"avoid_static", b.avoid_static},
            {"transitional_sog", b.tran_sog},
            {"transitional_course", b.tran_course},
            {"total", b.total}};
}

inline nlohmann::json metrics_json(const RunLog& log, const Metrics& m) {
    using nlohmann::json;
    json out;
    out["scenario"] = log.scenario;

    json statics = json::array();
    for (std::size_t i = 0; i < m.static_min_distance.size(); ++i)
        statics.push_back({{"index", i}, {"min_distance_m", m.static_min_distance[i]}});
    out["static_obstacles"] = statics;

    json moving = json::array();
    for (const auto& [id, d] : m.moving_min_distance) moving.push_back({{"id", id}, {"min_distance_m", d}});
    out["moving_obstacles"] = moving;

    out["cross_track_m"] = {{"mean", m.cross_track.mean},
                            {"rms", m.cross_track.rms},
                            {"max", m.cross_track.max},
                            {"final", m.cross_track.final}};
    out["region_entries"] = {{"collision", m.region_entries.collision},
                             {"safety", m.region_entries.safety},
                             {"margin", m.region_entries.margin}};
    out["max_static_cell_value"] = m.max_static_cell_value;
    out["polygon_incursion"] = m.polygon_incursion;

    json iters = json::array();
    for (const auto& p : log.planner) {
        iters.push_back({{"time_s", p.time},
                         {"index", p.index},
                         {"candidate_count", p.candidate_count},
                         {"leaf_path", p.leaf_path},
                         {"first_sog_accel_mps2", p.first_acceleration.sog},
                         {"first_course_accel_radps2", p.first_acceleration.course},
                         {"first_course_change_rad", p.first_course_change},
                         {"cost", breakdown_json(p.breakdown)},
                         {"transitional", {p.transitional.sog, p.transitional.course}},
                         {"wall_time_ms", p.wall_time_ms}});
    }
    out["iterations"] = iters;
    return out;
}

}  // namespace bcmpc
