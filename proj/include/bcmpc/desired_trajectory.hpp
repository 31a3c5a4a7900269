#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bcmpc {

struct Position {
    double north = 0.0;  // m
    double east = 0.0;   // m
};

inline double distance(const Position& a, const Position& b) { return std::hypot(a.north - b.north, a.east - b.east); }

inline double point_segment_distance(const Position& p, const Position& a, const Position& b) {
    const double dn = b.north - a.north, de = b.east - a.east;
    const double len2 = dn * dn + de * de;
    double s = len2 > 0.0 ? ((p.north - a.north) * dn + (p.east - a.east) * de) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return std::hypot(p.north - (a.north + s * dn), p.east - (a.east + s * de));
}

struct TimedWaypoint {
    double time = 0.0;  // s
    Position position;
};

/// Time-parameterized reference path p_d(t): piecewise-linear between waypoints,
/// extrapolated along the last leg after the final waypoint.
class DesiredTrajectory {
public:
    DesiredTrajectory() = default;

    explicit DesiredTrajectory(std::vector<TimedWaypoint> waypoints) : waypoints_(std::move(waypoints)) {
        if (waypoints_.size() < 2) throw std::invalid_argument("DesiredTrajectory: need at least two waypoints");
        for (std::size_t i = 1; i < waypoints_.size(); ++i)
            if (!(waypoints_[i].time > waypoints_[i - 1].time))
                throw std::invalid_argument("DesiredTrajectory: waypoint times must increase");
    }

    /// Waypoints traversed at a constant speed starting at start_time.
    static DesiredTrajectory from_path(const std::vector<Position>& path, double speed, double start_time = 0.0) {
        if (!(speed > 0.0)) throw std::invalid_argument("DesiredTrajectory: speed must be > 0");
        std::vector<TimedWaypoint> wps;
        double t = start_time;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i > 0) t += distance(path[i - 1], path[i]) / speed;
            wps.push_back({t, path[i]});
        }
        return DesiredTrajectory(std::move(wps));
    }

    const std::vector<TimedWaypoint>& waypoints() const { return waypoints_; }

    Position position(double t) const {
        const std::size_t i = leg_index(t);
        const auto& a = waypoints_[i];
        const auto& b = waypoints_[i + 1];
        const double s = (t - a.time) / (b.time - a.time);
        return {a.position.north + s * (b.position.north - a.position.north),
                a.position.east + s * (b.position.east - a.position.east)};
    }

    double speed(double t) const {
        const std::size_t i = leg_index(t);
        return distance(waypoints_[i].position, waypoints_[i + 1].position) /
               (waypoints_[i + 1].time - waypoints_[i].time);
    }

    double course(double t) const {
        const std::size_t i = leg_index(t);
        const auto& a = waypoints_[i].position;
        const auto& b = waypoints_[i + 1].position;
        return std::atan2(b.east - a.east, b.north - a.north);
    }

    /// Distance from p to the waypoint polyline.
    double cross_track_distance(const Position& p) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i)
            best = std::min(best, point_segment_distance(p, waypoints_[i].position, waypoints_[i + 1].position));
        return best;
    }

private:
    std::size_t leg_index(double t) const {
        if (waypoints_.size() < 2) throw std::logic_error("DesiredTrajectory: empty");
        auto it = std::upper_bound(waypoints_.begin(), waypoints_.end(), t,
                                   [](double v, const TimedWaypoint& w) { return v < w.time; });
        std::size_t idx = it == waypoints_.begin() ? 0 : static_cast<std::size_t>(std::distance(waypoints_.begin(), it)) - 1;
        return std::min(idx, waypoints_.size() - 2);
    }

    std::vector<TimedWaypoint> waypoints_;
};

}  // namespace bcmpc
