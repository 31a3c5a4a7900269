#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/cost_model.hpp"
#include "bcmpc/trajectory_tree.hpp"
#include "bcmpc/vessel_model.hpp"
#include "bcmpc/world_model.hpp"

namespace bcmpc {

struct PlannerConfig {
    TreeConfig tree{};
    ObjectiveWeights weights{};
    ObstacleRegions regions{};
    GuidanceConfig guidance{};
    double align_normalization = 100.0;  // m
    double pose_step = 0.5;              // s
    double transitional_step = 0.25;     // s
    double period = 5.0;                 // s between iterations
};

inline std::vector<std::string> validate(const PlannerConfig& cfg) {
    std::vector<std::string> out = validate(cfg.tree);
    for (auto&& v : validate(cfg.weights)) out.push_back(std::move(v));
    for (auto&& v : validate(cfg.regions)) out.push_back(std::move(v));
    if (!(cfg.guidance.lookahead_m > 0.0)) out.push_back("planner.guidance_lookahead_m must be > 0");
    if (!(cfg.align_normalization > 0.0)) out.push_back("planner.align_normalization_m must be > 0");
    if (!(cfg.pose_step > 0.0)) out.push_back("planner.pose_step_s must be > 0");
    if (!(cfg.transitional_step > 0.0)) out.push_back("planner.transitional_step_s must be > 0");
    if (!(cfg.period > 0.0)) out.push_back("planner.period_s must be > 0");
    return out;
}

class PlannerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PlanResult {
    std::size_t index = 0;
    std::size_t candidate_count = 0;
    CandidateTrajectory selected;
    CostBreakdown breakdown;
    TransitionalCost transitional;
    double wall_time_ms = 0.0;
};

/// Receding-horizon planner: builds the candidate tree, scores it, and remembers the selection.
class Planner {
public:
    Planner(PlannerConfig cfg, PlantConfig plant) : cfg_(std::move(cfg)), plant_(plant) {
        if (auto errs = validate(cfg_); !errs.empty()) throw std::invalid_argument("Planner: " + errs.front());
    }

    const PlannerConfig& config() const { return cfg_; }
    const PlannerMemory& memory() const { return memory_; }
    void reset() { memory_ = {}; }

    PlanResult plan(const VesselState& state, const DesiredTrajectory& desired_path,
                    const std::vector<ObstacleEstimate>& obstacles, const OccupancyGrid* grid) {
        const auto wall_start = std::chrono::steady_clock::now();
        TreeInputs in;
        in.state = state;
        in.current_desired = memory_.previous;
        in.desired_path = &desired_path;
        in.guidance = cfg_.guidance;
        in.pose_step = cfg_.pose_step;
        std::vector<CandidateTrajectory> candidates = build_tree(in, cfg_.tree, plant_);
        if (candidates.empty()) throw PlannerError("planner produced no candidate trajectories");

        CostContext ctx;
        ctx.weights = cfg_.weights;
        ctx.regions = cfg_.regions;
        ctx.desired_path = &desired_path;
        ctx.grid = grid;
        ctx.obstacles = obstacles;
        ctx.memory = &memory_;
        ctx.align_normalization = cfg_.align_normalization;
        ctx.transitional_step = cfg_.transitional_step;
        const Selection sel = select(candidates, ctx);

        PlanResult result;
        result.index = sel.index;
        result.candidate_count = candidates.size();
        result.breakdown = sel.best;
        result.transitional = sel.transitional[sel.index];
        result.selected = std::move(candidates[sel.index]);

        memory_.previous = result.selected.desired;
        memory_.start_time = state.time;
        memory_.first_step_time = cfg_.tree.step_times.front();
        result.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall_start).count();
        return result;
    }

private:
    PlannerConfig cfg_;
    PlantConfig plant_;
    PlannerMemory memory_;
};

}  // namespace bcmpc
