#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/desired_trajectory.hpp"
#include "bcmpc/motion_primitives.hpp"
#include "bcmpc/velocity_trajectory.hpp"
#include "bcmpc/vessel_model.hpp"

namespace bcmpc {

/// Per-level step times and branching with shared ramp and maneuver lengths.
struct TreeConfig {
    std::vector<double> step_times{20.0, 30.0, 30.0};  // s
    std::vector<std::size_t> n_sog{5, 1, 1};
    std::vector<std::size_t> n_course{5, 3, 3};
    double ramp_time = 1.0;             // s
    double sog_maneuver_time = 5.0;     // s
    double course_maneuver_time = 5.0;  // s

    std::size_t depth() const { return step_times.size(); }

    double horizon() const {
        double h = 0.0;
        for (double t : step_times) h += t;
        return h;
    }

    std::size_t candidate_count() const {
        std::size_t n = 1;
        for (std::size_t i = 0; i < depth(); ++i) n *= n_sog.at(i) * n_course.at(i);
        return n;
    }

    PrimitiveConfig level(std::size_t i) const {
        return {step_times.at(i), ramp_time, sog_maneuver_time, course_maneuver_time, n_sog.at(i), n_course.at(i)};
    }
};

inline std::vector<std::string> validate(const TreeConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.depth() < 1) out.push_back("tree: depth must be >= 1");
    if (cfg.n_sog.size() != cfg.depth() || cfg.n_course.size() != cfg.depth()) {
        out.push_back("tree: per-level lists must all have length equal to depth");
        return out;
    }
    for (std::size_t i = 0; i < cfg.depth(); ++i) {
        auto level = validate(cfg.level(i), "tree level " + std::to_string(i + 1));
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

struct Pose {
    double north = 0.0;   // m
    double east = 0.0;    // m
    double course = 0.0;  // rad, heading taken equal to course
};

/// Uniformly sampled pose trajectory.
struct PoseTrajectory {
    double start_time = 0.0;
    double step = 0.5;
    std::vector<double> times;
    std::vector<Pose> poses;

    double end_time() const { return times.empty() ? start_time : times.back(); }
};

/// Kinematic prediction: RK4 on p_dot = U (cos chi, sin chi) at a fixed step.
inline PoseTrajectory predict_pose(const VelocityTrajectory& velocity, const Position& initial, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("predict_pose: step must be > 0");
    PoseTrajectory out;
    out.start_time = velocity.start_time();
    out.step = step;
    const double t_end = velocity.end_time();
    const auto n_steps = static_cast<std::size_t>(std::ceil((t_end - out.start_time) / step - 1e-9));
    out.times.reserve(n_steps + 1);
    out.poses.reserve(n_steps + 1);

    auto rate = [&](double t) {
        const double u = velocity.sog(t);
        const double chi = velocity.course(t);
        return std::pair{u * std::cos(chi), u * std::sin(chi)};
    };

    double t = out.start_time;
    Position p = initial;
    out.times.push_back(t);
    out.poses.push_back({p.north, p.east, velocity.course(t)});
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t_next = std::min(out.start_time + static_cast<double>(k + 1) * step, t_end);
        const double h = t_next - t;
        // The right-hand side depends on time only, so the four RK4 stages reduce to three evaluations.
        const auto k1 = rate(t);
        const auto k23 = rate(t + 0.5 * h);
        const auto k4 = rate(t_next);
        p.north += h / 6.0 * (k1.first + 4.0 * k23.first + k4.first);
        p.east += h / 6.0 * (k1.second + 4.0 * k23.second + k4.second);
        t = t_next;
        out.times.push_back(t);
        out.poses.push_back({p.north, p.east, velocity.course(t)});
    }
    return out;
}

/// Vessel configuration at a tree node, expressed by its desired velocity.
struct ManeuverNode {
    double time = 0.0;
    Pose pose;
    double sog = 0.0;
    double course = 0.0;  // rad, unwrapped
    double course_rate = 0.0;
};

/// One maneuver edge leaving a node.
struct SubTrajectory {
    AccelPair acceleration;
    VelocityTrajectory velocity;
    ManeuverNode end_node;
};

/// Cartesian product of speed and course primitives from one node (sog-major order).
inline std::vector<SubTrajectory> generate_maneuvers(const ManeuverNode& node, const PrimitiveConfig& level_cfg,
                                                     const AccelerationLimits& limits,
                                                     const std::optional<AccelPair>& guidance = std::nullopt,
                                                     double pose_step = 0.5) {
    AccelerationGrid grid = make_grid(sample_accelerations(limits, level_cfg.n_sog, PrimitiveKind::sog),
                                      sample_accelerations(limits, level_cfg.n_course, PrimitiveKind::course));
    if (guidance) grid = apply_guidance(std::move(grid), *guidance, limits);

    std::vector<SubTrajectory> out;
    out.reserve(grid.size());
    const double horizon = level_cfg.step_time;
    for (const AccelPair& acc : grid) {
        SubTrajectory sub;
        sub.acceleration = acc;
        sub.velocity.sog_fn = integrate_speed(node.sog, speed_profile(acc.sog, level_cfg), horizon, node.time);
        sub.velocity.course_fn = integrate_course(node.course, node.course_rate, course_profile(acc.course, level_cfg),
                                                  level_cfg, horizon, node.time);
        sub.velocity.sample_step = pose_step;
        const PoseTrajectory poses = predict_pose(sub.velocity, {node.pose.north, node.pose.east}, pose_step);
        const double t_end = node.time + horizon;
        sub.end_node.time = t_end;
        sub.end_node.pose = poses.poses.back();
        sub.end_node.sog = sub.velocity.sog_fn.back_value();
        sub.end_node.course = sub.velocity.course_fn.back_value();
        sub.end_node.course_rate = sub.velocity.course_fn.derivative(t_end);
        out.push_back(std::move(sub));
    }
    return out;
}

/// One root-to-leaf path of the prediction tree.
struct CandidateTrajectory {
    VelocityTrajectory desired;
    VelocityTrajectory corrected;
    PoseTrajectory pose;
    std::vector<std::size_t> leaf_path;  // sample index per level
    std::vector<AccelPair> accelerations;
};

struct TreeInputs {
    VesselState state;                                  // measured vessel state at t0
    std::optional<VelocityTrajectory> current_desired;  // reference tracked by the controllers
    const DesiredTrajectory* desired_path = nullptr;    // for guidance; none disables the shift
    GuidanceConfig guidance{};
    double pose_step = 0.5;
};

/// Root node from the current desired velocity, or from the measured state on the first iteration.
inline ManeuverNode root_node(const TreeInputs& in) {
    ManeuverNode root;
    const double t0 = in.state.time;
    root.time = t0;
    root.pose = {in.state.position_north, in.state.position_east, in.state.course};
    if (in.current_desired && in.current_desired->start_time() <= t0) {
        const VelocityTrajectory& cur = *in.current_desired;
        root.sog = std::max(0.0, cur.sog_fn(t0));
        root.course = cur.course_fn(t0);
        root.course_rate = t0 <= cur.end_time() ? cur.course_fn.derivative(t0) : 0.0;
    } else {
        root.sog = in.state.sog;
        root.course = in.state.course;
        root.course_rate = in.state.course_rate;
    }
    return root;
}

namespace detail {

inline void expand_tree(const ManeuverNode& node, std::size_t level, const TreeConfig& cfg, const PlantConfig& plant,
                        const std::optional<AccelPair>& guidance, double pose_step, VelocityTrajectory prefix,
                        std::vector<std::size_t>& path, std::vector<AccelPair>& accels,
                        std::vector<CandidateTrajectory>& out, const VesselState& state) {
    VesselState at_node;
    at_node.sog = node.sog;
    at_node.course = wrap_to_pi(node.course);
    at_node.time = node.time;
    const AccelerationLimits limits = acceleration_limits(at_node, plant);
    const auto subs = generate_maneuvers(node, cfg.level(level), limits, level == 0 ? guidance : std::nullopt, pose_step);

    for (std::size_t i = 0; i < subs.size(); ++i) {
        VelocityTrajectory joined = prefix;
        if (joined.sog_fn.empty()) {
            joined = subs[i].velocity;
        } else {
            joined.sog_fn.append(subs[i].velocity.sog_fn);
            joined.course_fn.append(subs[i].velocity.course_fn);
        }
        path.push_back(i);
        accels.push_back(subs[i].acceleration);
        if (level + 1 == cfg.depth()) {
            CandidateTrajectory cand;
            cand.desired = std::move(joined);
            cand.desired.sample_step = pose_step;
            cand.corrected = feedback_correct(cand.desired, state, plant);
            cand.pose = predict_pose(cand.corrected, {state.position_north, state.position_east}, pose_step);
            cand.leaf_path = path;
            cand.accelerations = accels;
            out.push_back(std::move(cand));
        } else {
            expand_tree(subs[i].end_node, level + 1, cfg, plant, std::nullopt, pose_step, std::move(joined), path, accels,
                        out, state);
        }
        path.pop_back();
        accels.pop_back();
    }
}

}  // namespace detail

/// Builds every candidate of the prediction tree in deterministic depth-first order.
inline std::vector<CandidateTrajectory> build_tree(const TreeInputs& in, const TreeConfig& cfg, const PlantConfig& plant) {
    if (auto errs = validate(cfg); !errs.empty()) throw std::invalid_argument("build_tree: " + errs.front());
    const ManeuverNode root = root_node(in);

    std::optional<AccelPair> guidance;
    if (in.desired_path != nullptr) {
        VesselState steer = in.state;
        steer.sog = root.sog;
        steer.course = wrap_to_pi(root.course);
        steer.course_rate = root.course_rate;
        const AccelerationLimits limits = acceleration_limits(steer, plant);
        guidance = guidance_acceleration(steer, *in.desired_path, cfg.level(0), limits, in.guidance);
        if (in.guidance.keep_sample_band) guidance = limit_to_keep_band(*guidance, limits, cfg.level(0));
    }

    std::vector<CandidateTrajectory> out;
    out.reserve(cfg.candidate_count());
    std::vector<std::size_t> path;
    std::vector<AccelPair> accels;
    detail::expand_tree(root, 0, cfg, plant, guidance, in.pose_step, VelocityTrajectory{}, path, accels, out, in.state);
    return out;
}

}  // namespace bcmpc
