#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bcmpc/angles.hpp"
#include "bcmpc/desired_trajectory.hpp"
#include "bcmpc/piecewise_polynomial.hpp"
#include "bcmpc/velocity_trajectory.hpp"
#include "bcmpc/vessel_model.hpp"

namespace bcmpc {

/// Timing and branching of one maneuver-generation step.
struct PrimitiveConfig {
    double step_time = 20.0;            // s, T
    double ramp_time = 1.0;             // s, T_ramp
    double sog_maneuver_time = 5.0;     // s, T_U
    double course_maneuver_time = 5.0;  // s, T_chi
    std::size_t n_sog = 1;
    std::size_t n_course = 1;
};

inline std::vector<std::string> validate(const PrimitiveConfig& cfg, const std::string& where = "primitive") {
    std::vector<std::string> out;
    if (!(cfg.step_time > 0.0)) out.push_back(where + ": step time must be > 0");
    if (!(cfg.sog_maneuver_time > 0.0 && cfg.sog_maneuver_time <= cfg.step_time))
        out.push_back(where + ": sog maneuver time must be in (0, step time]");
    if (!(cfg.course_maneuver_time > 0.0 && cfg.course_maneuver_time <= cfg.step_time))
        out.push_back(where + ": course maneuver time must be in (0, step time]");
    const double ramp_max = std::min(cfg.sog_maneuver_time / 2.0, cfg.course_maneuver_time / 4.0);
    if (!(cfg.ramp_time > 0.0 && cfg.ramp_time <= ramp_max))
        out.push_back(where + ": ramp time " + std::to_string(cfg.ramp_time) + " must be in (0, min(T_U/2, T_chi/4) = " +
                      std::to_string(ramp_max) + "]");
    if (cfg.n_sog < 1) out.push_back(where + ": n_sog must be >= 1");
    if (cfg.n_course < 1) out.push_back(where + ": n_course must be >= 1");
    return out;
}

enum class PrimitiveKind { sog, course };

/// Piecewise-linear acceleration template on [0, maneuver_time], zero elsewhere.
struct AccelProfile {
    PrimitiveKind kind = PrimitiveKind::sog;
    double amplitude = 0.0;
    double maneuver_time = 0.0;
    std::vector<std::pair<double, double>> breakpoints;  // (time, acceleration), starts and ends at zero

    double value(double t) const {
        if (t <= 0.0 || t >= maneuver_time || breakpoints.size() < 2) return 0.0;
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            const auto& [t1, v1] = breakpoints[i];
            if (t <= t1) {
                const auto& [t0, v0] = breakpoints[i - 1];
                if (t1 <= t0) return v1;
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        return 0.0;
    }

    /// Profile as polynomial pieces over [t0, t0 + horizon].
    PiecewisePolynomial to_polynomial(double t0, double horizon) const {
        PiecewisePolynomial poly;
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            const auto& [ta, va] = breakpoints[i - 1];
            const auto& [tb, vb] = breakpoints[i];
            if (tb <= ta) continue;
            poly.append(PiecewisePolynomial::linear(t0 + ta, va, t0 + tb, vb));
        }
        if (poly.empty()) return PiecewisePolynomial::constant(t0, t0 + horizon, 0.0);
        if (horizon > maneuver_time) poly.append(PiecewisePolynomial::constant(poly.end(), t0 + horizon, 0.0));
        return poly;
    }
};

/// n amplitudes spanning [min, max], with the sample nearest zero forced to zero.
inline std::vector<double> sample_accelerations(const AccelerationLimits& limits, std::size_t n, PrimitiveKind kind) {
    if (n == 0) throw std::invalid_argument("sample_accelerations: n must be >= 1");
    if (n == 1) return {0.0};
    const double lo = kind == PrimitiveKind::sog ? limits.sog_accel_min : limits.course_accel_min;
    const double hi = kind == PrimitiveKind::sog ? limits.sog_accel_max : limits.course_accel_max;
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i)
        samples[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    auto nearest = std::min_element(samples.begin(), samples.end(),
                                    [](double a, double b) { return std::abs(a) < std::abs(b); });
    *nearest = 0.0;
    return samples;
}

/// Trapezoid: ramp up over T_ramp, hold, ramp down to zero at T_U.
inline AccelProfile speed_profile(double amplitude, const PrimitiveConfig& cfg) {
    const double tr = cfg.ramp_time, tu = cfg.sog_maneuver_time;
    return {PrimitiveKind::sog, amplitude, tu, {{0.0, 0.0}, {tr, amplitude}, {tu - tr, amplitude}, {tu, 0.0}}};
}

/// Positive trapezoid on [0, T_chi/2] followed by its negative mirror image.
inline AccelProfile course_profile(double amplitude, const PrimitiveConfig& cfg) {
    const double tr = cfg.ramp_time, tc = cfg.course_maneuver_time, half = 0.5 * tc;
    return {PrimitiveKind::course,
            amplitude,
            tc,
            {{0.0, 0.0},
             {tr, amplitude},
             {half - tr, amplitude},
             {half, 0.0},
             {half + tr, -amplitude},
             {tc - tr, -amplitude},
             {tc, 0.0}}};
}

/// Speed reference over [t0, t0 + horizon]; once speed reaches zero it stays there.
inline PiecewisePolynomial integrate_speed(double initial_sog, const AccelProfile& profile, double horizon,
                                           double t0 = 0.0) {
    if (horizon < profile.maneuver_time) throw std::invalid_argument("integrate_speed: horizon shorter than maneuver");
    const PiecewisePolynomial raw = profile.to_polynomial(t0, horizon).antiderivative(std::max(0.0, initial_sog));

    PiecewisePolynomial out;
    const auto& segs = raw.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double seg_end = i + 1 < segs.size() ? segs[i + 1].start : raw.end();
        const double len = seg_end - segs[i].start;
        if (segs[i].value(len) >= 0.0) {
            out.push_back(segs[i], seg_end);
            continue;
        }
        // Velocity is monotone inside a decelerating maneuver: bisect for the zero crossing.
        double lo = 0.0, hi = len;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, len); ++it) {
            const double mid = 0.5 * (lo + hi);
            (segs[i].value(mid) >= 0.0 ? lo : hi) = mid;
        }
        out.push_back(segs[i], segs[i].start + lo);
        PolySegment zero;
        zero.start = out.empty() ? segs[i].start : out.end();
        out.push_back(zero, raw.end());
        return out;
    }
    return out;
}

/// Course reference: open-loop initial rate decays linearly to zero over T_ramp,
/// plus the double integral of the course profile. Returned unwrapped.
inline PiecewisePolynomial integrate_course(double initial_course, double initial_rate, const AccelProfile& profile,
                                            const PrimitiveConfig& cfg, double horizon, double t0 = 0.0) {
    if (horizon < profile.maneuver_time) throw std::invalid_argument("integrate_course: horizon shorter than maneuver");
    PiecewisePolynomial rate = profile.to_polynomial(t0, horizon).antiderivative(0.0);
    if (initial_rate != 0.0) {
        const double tr = std::min(cfg.ramp_time, horizon);
        PiecewisePolynomial decay = PiecewisePolynomial::linear(t0, initial_rate, t0 + tr, 0.0);
        if (horizon > tr) decay.append(PiecewisePolynomial::constant(t0 + tr, t0 + horizon, 0.0));
        rate = rate + decay;
    }
    return rate.antiderivative(initial_course);
}

/// Net course change (rad) of a course primitive with unit amplitude and zero initial rate.
inline double unit_course_change(const PrimitiveConfig& cfg) {
    const AccelProfile unit = course_profile(1.0, cfg);
    return integrate_course(0.0, 0.0, unit, cfg, cfg.course_maneuver_time).back_value();
}

struct AccelPair {
    double sog = 0.0;     // m/s^2
    double course = 0.0;  // rad/s^2

    friend bool operator==(const AccelPair&, const AccelPair&) = default;
};

/// Candidate acceleration pairs in sog-major order.
using AccelerationGrid = std::vector<AccelPair>;

inline AccelerationGrid make_grid(const std::vector<double>& sog_samples, const std::vector<double>& course_samples) {
    AccelerationGrid grid;
    grid.reserve(sog_samples.size() * course_samples.size());
    for (double s : sog_samples)
        for (double c : course_samples) grid.push_back({s, c});
    return grid;
}

struct GuidanceConfig {
    double lookahead_m = 100.0;
    bool keep_sample_band = true;  // limit guidance so it always lands on the zero sample
};

/// Line-of-sight guidance toward the time-parameterized desired trajectory.
/// `state` carries the vessel position together with the velocity the next maneuver starts from.
inline AccelPair guidance_acceleration(const VesselState& state, const DesiredTrajectory& desired,
                                       const PrimitiveConfig& cfg, const AccelerationLimits& limits,
                                       const GuidanceConfig& guidance = {}) {
    const double t = state.time;
    const double desired_sog = desired.speed(t);
    const double lookahead_time = guidance.lookahead_m / std::max(desired_sog, 1e-3);
    const Position target = desired.position(t + lookahead_time);
    const double dn = target.north - state.position_north;
    const double de = target.east - state.position_east;
    const double desired_course = (dn == 0.0 && de == 0.0) ? desired.course(t) : std::atan2(de, dn);

    AccelPair out;
    out.sog = std::clamp((desired_sog - state.sog) / cfg.sog_maneuver_time, limits.sog_accel_min, limits.sog_accel_max);

    const double course_change = wrap_to_pi(desired_course - state.course) - state.course_rate * cfg.ramp_time / 2.0;
    out.course = std::clamp(course_change / unit_course_change(cfg), limits.course_accel_min, limits.course_accel_max);
    return out;
}

/// Limits each guidance component to just under half the spacing between adjacent samples, so the
/// sample it replaces is always the zero (keep-velocity) sample. Axes with a single sample are untouched.
inline AccelPair limit_to_keep_band(const AccelPair& guidance, const AccelerationLimits& limits,
                                    const PrimitiveConfig& cfg) {
    constexpr double kBandFraction = 0.999;
    auto limit = [&](double value, double lo, double hi, std::size_t n) {
        if (n < 2) return value;
        const double half_spacing = 0.5 * (hi - lo) / static_cast<double>(n - 1);
        return std::clamp(value, -kBandFraction * half_spacing, kBandFraction * half_spacing);
    };
    return {limit(guidance.sog, limits.sog_accel_min, limits.sog_accel_max, cfg.n_sog),
            limit(guidance.course, limits.course_accel_min, limits.course_accel_max, cfg.n_course)};
}

/// Moves the speed and course samples nearest to the guidance pair onto it when the pair is feasible.
inline AccelerationGrid apply_guidance(AccelerationGrid grid, const AccelPair& guidance, const AccelerationLimits& limits) {
    if (grid.empty()) throw std::invalid_argument("apply_guidance: empty grid");
    const bool feasible = guidance.sog >= limits.sog_accel_min && guidance.sog <= limits.sog_accel_max &&
                          guidance.course >= limits.course_accel_min && guidance.course <= limits.course_accel_max;
    if (!feasible) return grid;
    const double sog_span = limits.sog_accel_max - limits.sog_accel_min;
    const double course_span = limits.course_accel_max - limits.course_accel_min;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ds = (grid[i].sog - guidance.sog) / sog_span;
        const double dc = (grid[i].course - guidance.course) / course_span;
        const double d = ds * ds + dc * dc;
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    // Shift the nearest sample on each axis, so every pair built from it follows the guidance.
    const AccelPair nearest = grid[best];
    for (AccelPair& pair : grid) {
        if (pair.sog == nearest.sog) pair.sog = guidance.sog;
        if (pair.course == nearest.course) pair.course = guidance.course;
    }
    return grid;
}

}  // namespace bcmpc
