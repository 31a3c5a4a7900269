#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/angles.hpp"
#include "bcmpc/desired_trajectory.hpp"
#include "bcmpc/trajectory_tree.hpp"
#include "bcmpc/velocity_trajectory.hpp"
#include "bcmpc/world_model.hpp"

namespace bcmpc {

struct ObjectiveWeights {
    double align = 1.5;
    double avoid_moving = 6000.0;
    double avoid_static = 30.0;
    double tran_sog = 2100.0;
    double tran_course = 1050.0;
};

inline std::vector<std::string> validate(const ObjectiveWeights& w) {
    std::vector<std::string> out;
    if (!(w.align > 0.0)) out.push_back("weights.align must be > 0");
    if (!(w.avoid_moving > 0.0)) out.push_back("weights.avoid_moving must be > 0");
    if (!(w.avoid_static > 0.0)) out.push_back("weights.avoid_static must be > 0");
    if (!(w.tran_sog > 0.0)) out.push_back("weights.transitional_sog must be > 0");
    if (!(w.tran_course > 0.0)) out.push_back("weights.transitional_course must be > 0");
    return out;
}

/// Nested collision (0), safety (1) and margin (2) regions around a moving obstacle.
struct ObstacleRegions {
    std::array<double, 3> major{50.0, 150.0, 250.0};  // a_i, fore semi-axis (m)
    std::array<double, 3> minor{25.0, 75.0, 125.0};   // b_i, port and aft semi-axis (m)
    double colregs_expansion = 100.0;                 // d_COLREGs (m)
    double safety_value = 0.5;                        // cost on the safety boundary
    double min_oriented_sog = 0.5;                    // m/s; slower obstacles get circular regions

    double starboard(std::size_t i) const { return minor[i] + colregs_expansion; }
};

inline std::vector<std::string> validate(const ObstacleRegions& r) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < 3; ++i)
        if (!(r.major[i] > 0.0 && r.minor[i] > 0.0)) out.push_back("regions: semi-axes must be > 0");
    if (!(r.major[0] < r.major[1] && r.major[1] < r.major[2])) out.push_back("regions: require a0 < a1 < a2");
    if (!(r.minor[0] < r.minor[1] && r.minor[1] < r.minor[2])) out.push_back("regions: require b0 < b1 < b2");
    if (!(r.colregs_expansion >= 0.0)) out.push_back("regions: colregs expansion must be >= 0");
    if (!(r.safety_value > 0.0 && r.safety_value < 1.0)) out.push_back("regions: safety boundary cost must be in (0, 1)");
    return out;
}

/// Offset of `p` in the obstacle frame: x fore along the obstacle course, y toward its starboard side.
struct RelativePosition {
    double fore = 0.0;
    double starboard = 0.0;
};

inline RelativePosition to_obstacle_frame(const Position& p, const Position& obstacle, double obstacle_course) {
    const double dn = p.north - obstacle.north, de = p.east - obstacle.east;
    const double c = std::cos(obstacle_course), s = std::sin(obstacle_course);
    return {dn * c + de * s, -dn * s + de * c};
}

/// Normalized radial scale of `rel` for each region level (<= 1 means inside).
/// Quadrant semi-axes: fore-port (a, b), fore-starboard (a, c), aft-starboard (b, c), aft-port (b, b).
inline std::array<double, 3> region_scales(const RelativePosition& rel, const ObstacleRegions& regions,
                                           bool oriented = true) {
    std::array<double, 3> sigma{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!oriented) {
            sigma[i] = std::hypot(rel.fore, rel.starboard) / regions.minor[i];
            continue;
        }
        const double along = rel.fore >= 0.0 ? regions.major[i] : regions.minor[i];
        const double lateral = rel.starboard >= 0.0 ? regions.starboard(i) : regions.minor[i];
        sigma[i] = std::hypot(rel.fore / along, rel.starboard / lateral);
    }
    return sigma;
}

/// 1 inside the collision region, linear to safety_value at the safety boundary, linear to 0 at the margin boundary.
inline double region_cost(const RelativePosition& rel, const ObstacleRegions& regions, bool oriented = true) {
    const auto s = region_scales(rel, regions, oriented);
    if (s[0] <= 1.0) return 1.0;
    if (s[1] <= 1.0) {
        // Along a ray each scale grows linearly with range, so the boundary ranges are r/s_i.
        const double f = (1.0 - 1.0 / s[0]) / (1.0 / s[1] - 1.0 / s[0]);
        return 1.0 - (1.0 - regions.safety_value) * f;
    }
    if (s[2] <= 1.0) {
        const double f = (1.0 - 1.0 / s[1]) / (1.0 / s[2] - 1.0 / s[1]);
        return regions.safety_value * (1.0 - f);
    }
    return 0.0;
}

inline double region_cost_at(const Position& own, const ObstaclePrediction& obstacle, const ObstacleRegions& regions) {
    const bool oriented = obstacle.sog >= regions.min_oriented_sog;
    return region_cost(to_obstacle_frame(own, obstacle.position, oriented ? obstacle.course : 0.0), regions, oriented);
}

/// Innermost region level containing `own` (0 collision, 1 safety, 2 margin), or 3 when outside all.
inline int region_level(const Position& own, const ObstaclePrediction& obstacle, const ObstacleRegions& regions) {
    const bool oriented = obstacle.sog >= regions.min_oriented_sog;
    const auto s = region_scales(to_obstacle_frame(own, obstacle.position, oriented ? obstacle.course : 0.0), regions,
                                 oriented);
    for (int i = 0; i < 3; ++i)
        if (s[static_cast<std::size_t>(i)] <= 1.0) return i;
    return 3;
}

/// Time-averaged distance to the desired trajectory, normalized.
inline double align(const PoseTrajectory& pose, const DesiredTrajectory& desired, double normalization = 100.0) {
    if (pose.times.size() < 2) {
        if (pose.times.empty()) return 0.0;
        return distance({pose.poses[0].north, pose.poses[0].east}, desired.position(pose.times[0])) / normalization;
    }
    double integral = 0.0;
    double prev = distance({pose.poses[0].north, pose.poses[0].east}, desired.position(pose.times[0]));
    for (std::size_t k = 1; k < pose.times.size(); ++k) {
        const double cur = distance({pose.poses[k].north, pose.poses[k].east}, desired.position(pose.times[k]));
        integral += 0.5 * (prev + cur) * (pose.times[k] - pose.times[k - 1]);
        prev = cur;
    }
    return integral / (pose.times.back() - pose.times.front()) / normalization;
}

/// Worst region cost over all samples and obstacles.
inline double avoid_moving(const PoseTrajectory& pose, const std::vector<ObstacleEstimate>& obstacles,
                           const ObstacleRegions& regions) {
    double worst = 0.0;
    for (const auto& obs : obstacles)
        for (std::size_t k = 0; k < pose.times.size(); ++k) {
            const double c = region_cost_at({pose.poses[k].north, pose.poses[k].east},
                                            predict_obstacle(obs, pose.times[k]), regions);
            worst = std::max(worst, c);
            if (worst >= 1.0) return 1.0;
        }
    return worst;
}

/// Trapezoidal time integral of the occupancy value along the trajectory.
inline double avoid_static(const PoseTrajectory& pose, const OccupancyGrid& grid) {
    if (grid.empty() || pose.times.size() < 2) return 0.0;
    double integral = 0.0;
    double prev = grid.query({pose.poses[0].north, pose.poses[0].east});
    for (std::size_t k = 1; k < pose.times.size(); ++k) {
        const double cur = grid.query({pose.poses[k].north, pose.poses[k].east});
        integral += 0.5 * (prev + cur) * (pose.times[k] - pose.times[k - 1]);
        prev = cur;
    }
    return integral;
}

/// Desired velocity trajectory selected at the previous iteration.
struct PlannerMemory {
    std::optional<VelocityTrajectory> previous;
    double start_time = 0.0;
    double first_step_time = 20.0;  // T_1 at selection
};

struct TransitionalCost {
    int sog = 0;
    int course = 0;
    double sog_deviation = 0.0;     // m
    double course_deviation = 0.0;  // rad s
};

/// Integrals of |U_d - U_d^-| and |wrap(chi_d - chi_d^-)| over [t0, t0 + T_1] by the trapezoidal rule.
inline std::pair<double, double> transitional_deviation(const VelocityTrajectory& candidate,
                                                        const VelocityTrajectory& previous, double t0,
                                                        double first_step_time, double step) {
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(first_step_time / step - 1e-9)));
    const double h = first_step_time / static_cast<double>(n);
    auto sog_diff = [&](double t) {
        return std::abs(std::max(0.0, candidate.sog_fn(t)) - std::max(0.0, previous.sog_fn(t)));
    };
    auto course_diff = [&](double t) { return std::abs(wrap_to_pi(candidate.course_fn(t) - previous.course_fn(t))); };
    double es = 0.5 * (sog_diff(t0) + sog_diff(t0 + first_step_time));
    double ec = 0.5 * (course_diff(t0) + course_diff(t0 + first_step_time));
    for (std::size_t k = 1; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) * h;
        es += sog_diff(t);
        ec += course_diff(t);
    }
    return {es * h, ec * h};
}

/// Binary speed and course transitional costs: 1 iff the deviation strictly exceeds the minimum over candidates.
inline std::vector<TransitionalCost> transitional_costs(const std::vector<VelocityTrajectory>& candidates,
                                                        const PlannerMemory& memory, double t0, double step = 0.25) {
    std::vector<TransitionalCost> out(candidates.size());
    if (!memory.previous || candidates.empty()) return out;
    double min_sog = std::numeric_limits<double>::infinity(), min_course = min_sog;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto [es, ec] = transitional_deviation(candidates[i], *memory.previous, t0, memory.first_step_time, step);
        out[i].sog_deviation = es;
        out[i].course_deviation = ec;
        min_sog = std::min(min_sog, es);
        min_course = std::min(min_course, ec);
    }
    for (auto& c : out) {
        c.sog = c.sog_deviation > min_sog ? 1 : 0;
        c.course = c.course_deviation > min_course ? 1 : 0;
    }
    return out;
}

/// Unweighted terms of the objective and the weighted total.
struct CostBreakdown {
    double align = 0.0;
    double avoid_moving = 0.0;
    double avoid_static = 0.0;
    int tran_sog = 0;
    int tran_course = 0;
    double total = 0.0;
};

inline double objective(const CostBreakdown& terms, const ObjectiveWeights& w) {
    return w.align * terms.align + w.avoid_moving * terms.avoid_moving + w.avoid_static * terms.avoid_static +
           w.tran_sog * terms.tran_sog + w.tran_course * terms.tran_course;
}

struct CostContext {
    ObjectiveWeights weights{};
    ObstacleRegions regions{};
    const DesiredTrajectory* desired_path = nullptr;
    const OccupancyGrid* grid = nullptr;
    std::vector<ObstacleEstimate> obstacles;
    const PlannerMemory* memory = nullptr;
    double align_normalization = 100.0;  // m
    double transitional_step = 0.25;     // s
};

/// Evaluates every term for one candidate given its transitional cost.
inline CostBreakdown evaluate(const CandidateTrajectory& cand, const TransitionalCost& tran, const CostContext& ctx) {
    CostBreakdown b;
    if (ctx.desired_path != nullptr) b.align = align(cand.pose, *ctx.desired_path, ctx.align_normalization);
    b.avoid_moving = avoid_moving(cand.pose, ctx.obstacles, ctx.regions);
    if (ctx.grid != nullptr) b.avoid_static = avoid_static(cand.pose, *ctx.grid);
    b.tran_sog = tran.sog;
    b.tran_course = tran.course;
    b.total = objective(b, ctx.weights);
    return b;
}

struct Selection {
    std::size_t index = 0;
    CostBreakdown best;
    std::vector<CostBreakdown> breakdowns;
    std::vector<TransitionalCost> transitional;
};

/// Minimizes the objective; ties go to the lower transitional sum, then the lower index.
inline Selection select(const std::vector<CandidateTrajectory>& candidates, const CostContext& ctx) {
    if (candidates.empty()) throw std::invalid_argument("select: empty candidate set");
    Selection sel;
    std::vector<VelocityTrajectory> desired;
    desired.reserve(candidates.size());
    for (const auto& c : candidates) desired.push_back(c.desired);
    const double t0 = candidates.front().desired.start_time();
    sel.transitional = ctx.memory != nullptr ? transitional_costs(desired, *ctx.memory, t0, ctx.transitional_step)
                                             : std::vector<TransitionalCost>(candidates.size());
    sel.breakdowns.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        sel.breakdowns.push_back(evaluate(candidates[i], sel.transitional[i], ctx));
        const CostBreakdown& b = sel.breakdowns.back();
        const CostBreakdown& cur = sel.breakdowns[sel.index];
        if (i == 0) continue;
        if (b.total < cur.total ||
            (b.total == cur.total && b.tran_sog + b.tran_course < cur.tran_sog + cur.tran_course))
            sel.index = i;
    }
    sel.best = sel.breakdowns[sel.index];
    return sel;
}

}  // namespace bcmpc
