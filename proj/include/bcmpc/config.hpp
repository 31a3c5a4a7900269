#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "bcmpc/angles.hpp"
#include "bcmpc/planner.hpp"
#include "bcmpc/scenarios.hpp"
#include "bcmpc/sim_harness.hpp"
#include "bcmpc/vessel_model.hpp"

namespace bcmpc {

/// Unreadable file, malformed JSON, or a field of the wrong type.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Params {
    PlannerConfig planner{};
    PlantConfig plant{};
    SimConfig sim{};
    std::vector<std::string> unknown_keys;  // reported by validate
};

namespace detail {

using nlohmann::json;

// Reads known keys of one JSON object and remembers which keys were never consumed.
class Section {
public:
    Section(const json& j, std::string path, std::vector<std::string>& unknown) : j_(j), path_(std::move(path)), unknown_(unknown) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }
    ~Section() {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) unknown_.push_back(path_ + "." + it.key() + ": unknown key");
    }
    Section(const Section&) = delete;
    Section& operator=(const Section&) = delete;

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) throw ConfigError(path_ + "." + key + ": expected a number");
            out = v->get<double>();
        }
    }

    void flag(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) throw ConfigError(path_ + "." + key + ": expected a boolean");
            out = v->get<bool>();
        }
    }

    template <class T>
    void list(const std::string& key, std::vector<T>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) throw ConfigError(path_ + "." + key + ": expected an array");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) throw ConfigError(path_ + "." + key + ": expected numbers");
                if constexpr (std::is_integral_v<T>) {
                    if (!e.is_number_integer() || e.get<long long>() < 0)
                        throw ConfigError(path_ + "." + key + ": expected non-negative integers");
                    out.push_back(static_cast<T>(e.get<long long>()));
                } else {
                    out.push_back(e.get<T>());
                }
            }
        }
    }

    void triple(const std::string& key, std::array<double, 3>& out) {
        std::vector<double> v;
        list(key, v);
        if (v.empty()) return;
        if (v.size() != 3) throw ConfigError(path_ + "." + key + ": expected three values");
        out = {v[0], v[1], v[2]};
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& unknown_;
    std::set<std::string> seen_;
};

inline void read_limit(Section& parent, const std::string& key, AffineLimit& lim, std::vector<std::string>& unknown) {
    if (const json* v = parent.find(key)) {
        Section s(*v, parent.path() + "." + key, unknown);
        s.number("base", lim.base);
        s.number("slope_per_mps", lim.slope);
        s.number("floor", lim.floor);
    }
}

inline json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline Position read_position(const json& j, const std::string& path, std::vector<std::string>& unknown) {
    Section s(j, path, unknown);
    Position p;
    s.number("north_m", p.north);
    s.number("east_m", p.east);
    return p;
}

}  // namespace detail

/// Missing keys keep their defaults. Throws ConfigError on wrong types.
inline Params params_from_json(const nlohmann::json& j) {
    Params p;
    std::vector<std::string>& unknown = p.unknown_keys;
    {
        detail::Section root(j, "params", unknown);

        if (const auto* v = root.find("tree")) {
            detail::Section s(*v, "tree", unknown);
            TreeConfig& t = p.planner.tree;
            s.list("step_times_s", t.step_times);
            s.list("n_sog", t.n_sog);
            s.list("n_course", t.n_course);
            s.number("ramp_time_s", t.ramp_time);
            s.number("sog_maneuver_time_s", t.sog_maneuver_time);
            s.number("course_maneuver_time_s", t.course_maneuver_time);
        }
        if (const auto* v = root.find("weights")) {
            detail::Section s(*v, "weights", unknown);
            ObjectiveWeights& w = p.planner.weights;
            s.number("align", w.align);
            s.number("avoid_moving", w.avoid_moving);
            s.number("avoid_static", w.avoid_static);
            s.number("transitional_sog", w.tran_sog);
            s.number("transitional_course", w.tran_course);
        }
        if (const auto* v = root.find("regions")) {
            detail::Section s(*v, "regions", unknown);
            ObstacleRegions& r = p.planner.regions;
            s.triple("major_axes_m", r.major);
            s.triple("minor_axes_m", r.minor);
            s.number("colregs_expansion_m", r.colregs_expansion);
            s.number("safety_value", r.safety_value);
            s.number("min_oriented_sog_mps", r.min_oriented_sog);
        }
        if (const auto* v = root.find("planner")) {
            detail::Section s(*v, "planner", unknown);
            PlannerConfig& c = p.planner;
            s.number("period_s", c.period);
            s.number("pose_step_s", c.pose_step);
            s.number("transitional_step_s", c.transitional_step);
            s.number("align_normalization_m", c.align_normalization);
            s.number("guidance_lookahead_m", c.guidance.lookahead_m);
            s.flag("guidance_keep_sample_band", c.guidance.keep_sample_band);
        }
        if (const auto* v = root.find("plant")) {
            detail::Section s(*v, "plant", unknown);
            PlantConfig& c = p.plant;
            s.number("sog_time_constant_s", c.sog_time_constant);
            s.number("course_time_constant_s", c.course_time_constant);
            s.number("course_rate_time_constant_s", c.course_rate_time_constant);
            s.number("max_course_rate_radps", c.max_course_rate);
            s.number("step_s", c.step);
            detail::read_limit(s, "sog_accel_max_mps2", c.sog_accel_max, unknown);
            detail::read_limit(s, "sog_accel_min_mps2", c.sog_accel_min, unknown);
            detail::read_limit(s, "course_accel_max_radps2", c.course_accel_max, unknown);
            detail::read_limit(s, "course_accel_min_radps2", c.course_accel_min, unknown);
        }
        if (const auto* v = root.find("grid")) {
            detail::Section s(*v, "grid", unknown);
            s.number("resolution_m", p.sim.grid_resolution);
        }
        if (const auto* v = root.find("sim")) {
            detail::Section s(*v, "sim", unknown);
            s.number("plant_step_s", p.sim.plant_step);
            s.number("estimate_period_s", p.sim.estimate_period);
            s.number("estimate_latency_s", p.sim.estimate_latency);
        }
    }
    return p;
}

inline Params load_params(const std::string& path) { return params_from_json(detail::parse_file(path)); }

/// Every violated invariant, one message each. Empty means valid.
inline std::vector<std::string> validate(const Params& p) {
    std::vector<std::string> out = p.unknown_keys;
    for (auto&& v : validate(p.planner)) out.push_back(std::move(v));
    for (auto&& v : validate(p.plant)) out.push_back(std::move(v));
    for (auto&& v : validate(p.sim)) out.push_back(std::move(v));
    if (p.sim.plant_step > p.plant.step + 1e-12) out.push_back("sim.plant_step_s must not exceed plant.step_s");
    return out;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    std::vector<std::string> unknown;
    Scenario sc;
    {
        detail::Section root(j, "scenario", unknown);
        if (const auto* v = root.find("name")) {
            if (!v->is_string()) throw ConfigError("scenario.name: expected a string");
            sc.name = v->get<std::string>();
        }
        root.number("duration_s", sc.duration);
        if (const auto* v = root.find("seed")) {
            if (!v->is_number_unsigned()) throw ConfigError("scenario.seed: expected a non-negative integer");
            sc.seed = v->get<std::uint64_t>();
        }

        const auto* own = root.find("ownship");
        if (!own) throw ConfigError("scenario.ownship: missing");
        {
            detail::Section s(*own, "scenario.ownship", unknown);
            double course_deg = 0.0;
            s.number("north_m", sc.ownship.position_north);
            s.number("east_m", sc.ownship.position_east);
            s.number("sog_mps", sc.ownship.sog);
            s.number("course_deg", course_deg);
            sc.ownship.course = wrap_to_pi(deg_to_rad(course_deg));
        }

        const auto* des = root.find("desired");
        if (!des) throw ConfigError("scenario.desired: missing");
        {
            detail::Section s(*des, "scenario.desired", unknown);
            double speed = 0.0, start = 0.0;
            s.number("speed_mps", speed);
            s.number("start_time_s", start);
            const auto* wps = s.find("waypoints");
            if (!wps || !wps->is_array()) throw ConfigError("scenario.desired.waypoints: expected an array");
            std::vector<Position> path;
            std::vector<TimedWaypoint> timed;
            bool all_timed = !wps->empty();
            for (std::size_t i = 0; i < wps->size(); ++i) {
                const auto& w = (*wps)[i];
                const std::string wp = "scenario.desired.waypoints[" + std::to_string(i) + "]";
                detail::Section ws(w, wp, unknown);
                Position p;
                ws.number("north_m", p.north);
                ws.number("east_m", p.east);
                double t = 0.0;
                if (ws.find("time_s")) ws.number("time_s", t);
                else all_timed = false;
                path.push_back(p);
                timed.push_back({t, p});
            }
            try {
                sc.desired = all_timed ? DesiredTrajectory(std::move(timed)) : DesiredTrajectory::from_path(path, speed, start);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("scenario.desired: ") + e.what());
            }
        }

        if (const auto* v = root.find("static_obstacles")) {
            if (!v->is_array()) throw ConfigError("scenario.static_obstacles: expected an array");
            for (std::size_t i = 0; i < v->size(); ++i) {
                const std::string op = "scenario.static_obstacles[" + std::to_string(i) + "]";
                detail::Section s((*v)[i], op, unknown);
                StaticObstacle o;
                s.number("padding_m", o.padding);
                const auto* poly = s.find("polygon");
                if (!poly || !poly->is_array()) throw ConfigError(op + ".polygon: expected an array");
                for (std::size_t k = 0; k < poly->size(); ++k)
                    o.polygon.push_back(detail::read_position((*poly)[k], op + ".polygon[" + std::to_string(k) + "]", unknown));
                sc.static_obstacles.push_back(std::move(o));
            }
        }

        if (const auto* v = root.find("moving_obstacles")) {
            if (!v->is_array()) throw ConfigError("scenario.moving_obstacles: expected an array");
            for (std::size_t i = 0; i < v->size(); ++i) {
                const std::string op = "scenario.moving_obstacles[" + std::to_string(i) + "]";
                detail::Section s((*v)[i], op, unknown);
                MovingObstacleScript m;
                double id = static_cast<double>(i + 1), course_deg = 0.0;
                s.number("id", id);
                s.number("north_m", m.initial.north);
                s.number("east_m", m.initial.east);
                s.number("sog_mps", m.sog);
                s.number("course_deg", course_deg);
                m.id = static_cast<int>(id);
                m.course = wrap_to_pi(deg_to_rad(course_deg));
                sc.moving_obstacles.push_back(m);
            }
        }

        if (const auto* v = root.find("noise")) {
            detail::Section s(*v, "scenario.noise", unknown);
            s.number("position_sigma_m", sc.noise.position_sigma);
            s.number("velocity_sigma_mps", sc.noise.velocity_sigma);
        }
    }
    if (!unknown.empty()) throw ConfigError(unknown.front());
    return sc;
}

inline Scenario load_scenario(const std::string& path) { return scenario_from_json(detail::parse_file(path)); }

/// Built-in name first, then a file path.
inline Scenario resolve_scenario(const std::string& name_or_path) {
    if (auto s = builtin_scenario(name_or_path)) return *s;
    return load_scenario(name_or_path);
}

}  // namespace bcmpc
