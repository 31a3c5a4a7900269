#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "bcmpc/sim_harness.hpp"

namespace bcmpc {

struct PlotStyle {
    double pixels_per_meter = 0.2;
    double margin_m = 150.0;
    double marker_period_s = 60.0;
};

namespace detail {

struct Extent {
    double n_lo = std::numeric_limits<double>::infinity();
    double n_hi = -std::numeric_limits<double>::infinity();
    double e_lo = std::numeric_limits<double>::infinity();
    double e_hi = -std::numeric_limits<double>::infinity();

    void add(const Position& p, double pad = 0.0) {
        n_lo = std::min(n_lo, p.north - pad);
        n_hi = std::max(n_hi, p.north + pad);
        e_lo = std::min(e_lo, p.east - pad);
        e_hi = std::max(e_hi, p.east + pad);
    }
};

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

}  // namespace detail

/// North-up plan view: x is east, y is north flipped for screen coordinates.
inline void write_svg(std::ostream& os, const RunLog& log, const Scenario& scenario, const PlotStyle& style = {}) {
    if (log.states.empty()) throw std::invalid_argument("write_svg: empty log");
    const double t_end = log.states.back().time;

    detail::Extent ext;
    for (const auto& r : log.states) ext.add({r.state.position_north, r.state.position_east});
    for (const auto& o : scenario.static_obstacles)
        for (const auto& v : o.polygon) ext.add(v, o.padding);
    for (const auto& r : log.obstacles) ext.add(r.truth.position);
    ext.add(scenario.desired.position(0.0));
    ext.add(scenario.desired.position(t_end));
    ext.n_lo -= style.margin_m;
    ext.n_hi += style.margin_m;
    ext.e_lo -= style.margin_m;
    ext.e_hi += style.margin_m;

    const double s = style.pixels_per_meter;
    auto x = [&](const Position& p) { return detail::num((p.east - ext.e_lo) * s); };
    auto y = [&](const Position& p) { return detail::num((ext.n_hi - p.north) * s); };
    auto xy = [&](const Position& p) { return x(p) + "," + y(p); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num((ext.e_hi - ext.e_lo) * s)
       << "\" height=\"" << detail::num((ext.n_hi - ext.n_lo) * s) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // padding drawn as a wide stroke with round joins, so its outer edge is the padding contour
    for (const auto& o : scenario.static_obstacles) {
        std::string pts;
        for (const auto& v : o.polygon) pts += xy(v) + " ";
        if (o.padding > 0.0)
            os << "<polygon points=\"" << pts << "\" fill=\"#f2d7a6\" stroke=\"#f2d7a6\" stroke-linejoin=\"round\" stroke-width=\""
               << detail::num(2.0 * o.padding * s) << "\"/>\n";
        os << "<polygon points=\"" << pts << "\" fill=\"#8c6d3f\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }

    os << "<polyline fill=\"none\" stroke=\"#2a9d2a\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\" points=\"";
    for (const auto& w : scenario.desired.waypoints())
        if (w.time <= t_end) os << xy(w.position) << " ";
    os << xy(scenario.desired.position(t_end)) << "\"/>\n";

    for (int id : log.obstacle_ids) {
        os << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
        for (const auto& r : log.obstacles)
            if (r.truth.id == id) os << xy(r.truth.position) << " ";
        os << "\"/>\n";
    }

    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < log.states.size(); i += 10) {
        const auto& st = log.states[i].state;
        os << xy({st.position_north, st.position_east}) << " ";
    }
    const auto& last = log.states.back().state;
    os << xy({last.position_north, last.position_east}) << "\"/>\n";

    // markers every marker period, labelled in seconds
    double next_mark = 0.0;
    for (const auto& r : log.states) {
        if (r.time + 1e-9 < next_mark) continue;
        const Position p{r.state.position_north, r.state.position_east};
        os << "<text x=\"" << x(p) << "\" y=\"" << y(p) << "\" font-size=\"12\" text-anchor=\"middle\" dy=\"4\">*</text>";
        os << "<text x=\"" << x(p) << "\" y=\"" << y(p) << "\" font-size=\"10\" dx=\"6\">" << detail::num(r.time)
           << "</text>\n";
        for (const auto& o : log.obstacles) {
            if (std::abs(o.time - r.time) > 1e-9) continue;
            os << "<text x=\"" << x(o.truth.position) << "\" y=\"" << y(o.truth.position)
               << "\" font-size=\"12\" fill=\"#c0392b\" text-anchor=\"middle\" dy=\"4\">*</text>\n";
        }
        next_mark += style.marker_period_s;
    }
    os << "</svg>\n";
}

}  // namespace bcmpc
