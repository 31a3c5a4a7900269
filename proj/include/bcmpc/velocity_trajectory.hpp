#pragma once

#include <algorithm>
#include <cmath>

#include "bcmpc/piecewise_polynomial.hpp"

namespace bcmpc {

/// Exponentially decaying velocity error added on top of a desired trajectory.
struct ErrorDecay {
    double start_time = 0.0;
    double sog_error = 0.0;     // m/s at start_time
    double course_error = 0.0;  // rad at start_time, wrapped
    double sog_time_constant = 1.0;
    double course_time_constant = 1.0;

    double sog_at(double t) const {
        if (sog_error == 0.0) return 0.0;
        return sog_error * std::exp(-std::max(0.0, t - start_time) / sog_time_constant);
    }
    double course_at(double t) const {
        if (course_error == 0.0) return 0.0;
        return course_error * std::exp(-std::max(0.0, t - start_time) / course_time_constant);
    }
};

/// Time-parameterized speed (m/s) and course (rad, unwrapped) reference.
struct VelocityTrajectory {
    PiecewisePolynomial sog_fn;
    PiecewisePolynomial course_fn;
    ErrorDecay correction{};
    double sample_step = 0.5;  // s, for discretized consumers

    double start_time() const { return sog_fn.start(); }
    double end_time() const { return sog_fn.end(); }
    double horizon() const { return end_time() - start_time(); }

    double sog(double t) const { return std::max(0.0, std::max(0.0, sog_fn(t)) + correction.sog_at(t)); }
    double course(double t) const { return course_fn(t) + correction.course_at(t); }
    double course_rate(double t) const {
        double rate = course_fn.derivative(t);
        if (correction.course_error != 0.0 && t >= correction.start_time)
            rate -= correction.course_at(t) / correction.course_time_constant;
        return rate;
    }
};

}  // namespace bcmpc
