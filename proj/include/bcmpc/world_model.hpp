#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmpc/angles.hpp"
#include "bcmpc/desired_trajectory.hpp"

namespace bcmpc {

/// Rasterized static obstacle map with values in [0, 100]. Row index grows north, column index grows east.
class OccupancyGrid {
public:
    OccupancyGrid() = default;

    OccupancyGrid(Position origin, double resolution, std::size_t rows, std::size_t cols)
        : origin_(origin), resolution_(resolution), rows_(rows), cols_(cols), values_(rows * cols, 0.0f) {
        if (!(resolution > 0.0)) throw std::invalid_argument("OccupancyGrid: resolution must be > 0");
    }

    const Position& origin() const { return origin_; }
    double resolution() const { return resolution_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return values_.empty(); }

    float at(std::size_t row, std::size_t col) const { return values_[row * cols_ + col]; }
    void set(std::size_t row, std::size_t col, float v) { values_[row * cols_ + col] = std::clamp(v, 0.0f, 100.0f); }

    Position cell_center(std::size_t row, std::size_t col) const {
        return {origin_.north + (static_cast<double>(row) + 0.5) * resolution_,
                origin_.east + (static_cast<double>(col) + 0.5) * resolution_};
    }

    /// Nearest-cell lookup; 0 outside the grid.
    double query(const Position& p) const {
        if (values_.empty()) return 0.0;
        const double r = std::floor((p.north - origin_.north) / resolution_);
        const double c = std::floor((p.east - origin_.east) / resolution_);
        if (r < 0.0 || c < 0.0 || r >= static_cast<double>(rows_) || c >= static_cast<double>(cols_)) return 0.0;
        return at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }

private:
    Position origin_{};
    double resolution_ = 1.0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<float> values_;
};

inline double query(const OccupancyGrid& grid, const Position& p) { return grid.query(p); }

struct StaticObstacle {
    std::vector<Position> polygon;
    double padding = 150.0;  // m
};

inline bool point_in_polygon(const Position& p, const std::vector<Position>& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.north > p.north) != (b.north > p.north)) {
            const double east_at = a.east + (p.north - a.north) * (b.east - a.east) / (b.north - a.north);
            if (p.east < east_at) inside = !inside;
        }
    }
    return inside;
}

/// Euclidean distance to a polygon; zero inside.
inline double distance_to_polygon(const Position& p, const std::vector<Position>& poly) {
    if (point_in_polygon(p, poly)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
        best = std::min(best, point_segment_distance(p, poly[j], poly[i]));
    return best;
}

namespace detail {

inline double cross(const Position& o, const Position& a, const Position& b) {
    return (a.north - o.north) * (b.east - o.east) - (a.east - o.east) * (b.north - o.north);
}

inline bool segments_cross(const Position& p1, const Position& p2, const Position& q1, const Position& q2) {
    const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

/// 1D squared Euclidean distance transform (lower envelope of parabolas).
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        if (f[q] == inf) continue;
        if (f[v[k]] == inf) {
            v[k] = q;
            continue;
        }
        double s;
        while (true) {
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
            if (s <= z[k] && k > 0) {
                --k;
                continue;
            }
            break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double diff = q - v[k];
        d[q] = f[v[k]] == inf ? inf : diff * diff + f[v[k]];
    }
}

/// Squared distance (in cells) from every cell to the nearest seed cell.
inline std::vector<double> edt_2d(const std::vector<bool>& seeds, std::size_t rows, std::size_t cols) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> grid(rows * cols);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = seeds[i] ? 0.0 : inf;
    const std::size_t n = std::max(rows, cols);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    f.resize(rows);
    d.resize(rows);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows; ++r) f[r] = grid[r * cols + c];
        edt_1d(f, d, v, z);
        for (std::size_t r = 0; r < rows; ++r) grid[r * cols + c] = d[r];
    }
    f.resize(cols);
    d.resize(cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) f[c] = grid[r * cols + c];
        edt_1d(f, d, v, z);
        for (std::size_t c = 0; c < cols; ++c) grid[r * cols + c] = d[c];
    }
    return grid;
}

}  // namespace detail

/// Throws std::invalid_argument for polygons that cannot be rasterized.
inline void check_polygon(const StaticObstacle& obstacle) {
    const auto& poly = obstacle.polygon;
    if (poly.size() < 3) throw std::invalid_argument("static obstacle: polygon needs at least 3 vertices");
    if (!(obstacle.padding >= 0.0)) throw std::invalid_argument("static obstacle: padding must be >= 0");
    double area2 = 0.0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
        area2 += poly[j].north * poly[i].east - poly[i].north * poly[j].east;
    if (std::abs(area2) < 1e-9) throw std::invalid_argument("static obstacle: polygon has zero area");
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (detail::segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                throw std::invalid_argument("static obstacle: polygon is self-intersecting");
        }
}

struct GridBounds {
    Position min;
    Position max;
};

/// Bounds enclosing every obstacle and its padding, with one spare cell on each side.
inline GridBounds bounds_for(const std::vector<StaticObstacle>& obstacles, double resolution) {
    GridBounds b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
                 {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
    for (const auto& o : obstacles)
        for (const auto& p : o.polygon) {
            b.min.north = std::min(b.min.north, p.north - o.padding - resolution);
            b.min.east = std::min(b.min.east, p.east - o.padding - resolution);
            b.max.north = std::max(b.max.north, p.north + o.padding + resolution);
            b.max.east = std::max(b.max.east, p.east + o.padding + resolution);
        }
    return b;
}

/// Cells whose center lies inside a polygon get 100; within the padding distance the value
/// decays linearly to 0. Overlapping obstacles combine by maximum.
inline OccupancyGrid rasterize_and_pad(const std::vector<StaticObstacle>& obstacles, double resolution,
                                       const GridBounds& bounds) {
    if (!(resolution > 0.0)) throw std::invalid_argument("rasterize_and_pad: resolution must be > 0");
    if (obstacles.empty()) return OccupancyGrid{};
    for (const auto& o : obstacles) check_polygon(o);
    const auto rows = static_cast<std::size_t>(std::ceil((bounds.max.north - bounds.min.north) / resolution));
    const auto cols = static_cast<std::size_t>(std::ceil((bounds.max.east - bounds.min.east) / resolution));
    OccupancyGrid grid(bounds.min, resolution, rows, cols);

    for (const auto& o : obstacles) {
        double n_lo = std::numeric_limits<double>::infinity(), n_hi = -n_lo, e_lo = n_lo, e_hi = -n_lo;
        for (const auto& p : o.polygon) {
            n_lo = std::min(n_lo, p.north);
            n_hi = std::max(n_hi, p.north);
            e_lo = std::min(e_lo, p.east);
            e_hi = std::max(e_hi, p.east);
        }
        const double reach = o.padding + resolution;
        auto to_index = [&](double v, double origin, std::size_t count) {
            const double idx = std::floor((v - origin) / resolution);
            return static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(count)));
        };
        const std::size_t r0 = to_index(n_lo - reach, bounds.min.north, rows);
        const std::size_t r1 = std::min(rows, to_index(n_hi + reach, bounds.min.north, rows) + 1);
        const std::size_t c0 = to_index(e_lo - reach, bounds.min.east, cols);
        const std::size_t c1 = std::min(cols, to_index(e_hi + reach, bounds.min.east, cols) + 1);
        if (r1 <= r0 || c1 <= c0) continue;
        const std::size_t wr = r1 - r0, wc = c1 - c0;

        std::vector<bool> inside(wr * wc, false);
        bool any = false;
        for (std::size_t r = 0; r < wr; ++r)
            for (std::size_t c = 0; c < wc; ++c)
                if (point_in_polygon(grid.cell_center(r0 + r, c0 + c), o.polygon)) {
                    inside[r * wc + c] = true;
                    any = true;
                }
        if (!any) continue;
        const std::vector<double> dist2 = detail::edt_2d(inside, wr, wc);
        for (std::size_t r = 0; r < wr; ++r)
            for (std::size_t c = 0; c < wc; ++c) {
                double value = 0.0;
                if (inside[r * wc + c]) {
                    value = 100.0;
                } else if (o.padding > 0.0) {
                    const double d = std::sqrt(dist2[r * wc + c]) * resolution;
                    if (d < o.padding) value = 100.0 * (1.0 - d / o.padding);
                }
                if (value > grid.at(r0 + r, c0 + c)) grid.set(r0 + r, c0 + c, static_cast<float>(value));
            }
    }
    return grid;
}

/// Writes the grid as an 8-bit binary PGM (maxval 100, north up) and a JSON sidecar with origin and resolution.
inline void write_pgm(const OccupancyGrid& grid, const std::string& pgm_path, const std::string& sidecar_path) {
    std::ofstream pgm(pgm_path, std::ios::binary);
    if (!pgm) throw std::runtime_error("cannot write " + pgm_path);
    pgm << "P5\n" << grid.cols() << ' ' << grid.rows() << "\n100\n";
    for (std::size_t r = grid.rows(); r-- > 0;)
        for (std::size_t c = 0; c < grid.cols(); ++c)
            pgm.put(static_cast<char>(static_cast<std::uint8_t>(std::lround(grid.at(r, c)))));
    std::ofstream side(sidecar_path);
    if (!side) throw std::runtime_error("cannot write " + sidecar_path);
    side << "{\n  \"origin_north_m\": " << grid.origin().north << ",\n  \"origin_east_m\": " << grid.origin().east
         << ",\n  \"resolution_m\": " << grid.resolution() << ",\n  \"rows\": " << grid.rows()
         << ",\n  \"cols\": " << grid.cols() << ",\n  \"first_row\": \"north\"\n}\n";
}

/// Tracked moving obstacle (position and ground velocity at timestamp).
struct ObstacleEstimate {
    int id = 0;
    Position position;
    double velocity_north = 0.0;  // m/s
    double velocity_east = 0.0;   // m/s
    double timestamp = 0.0;       // s

    double sog() const { return std::hypot(velocity_north, velocity_east); }
    double course() const { return sog() > 0.0 ? std::atan2(velocity_east, velocity_north) : 0.0; }

    static ObstacleEstimate from_sog_course(int id, Position p, double sog, double course, double t) {
        return {id, p, sog * std::cos(course), sog * std::sin(course), t};
    }
};

struct ObstaclePrediction {
    Position position;
    double course = 0.0;
    double sog = 0.0;
};

/// Constant-velocity extrapolation.
inline ObstaclePrediction predict_obstacle(const ObstacleEstimate& est, double t) {
    const double dt = t - est.timestamp;
    return {{est.position.north + est.velocity_north * dt, est.position.east + est.velocity_east * dt},
            est.course(),
            est.sog()};
}

/// Adds zero-mean Gaussian noise to position and velocity components.
template <typename Engine>
ObstacleEstimate inject_noise(const ObstacleEstimate& truth, double sigma_pos, double sigma_vel, Engine& rng) {
    if (sigma_pos < 0.0 || sigma_vel < 0.0) throw std::invalid_argument("inject_noise: sigma must be >= 0");
    ObstacleEstimate out = truth;
    if (sigma_pos > 0.0) {
        std::normal_distribution<double> pos(0.0, sigma_pos);
        out.position.north += pos(rng);
        out.position.east += pos(rng);
    }
    if (sigma_vel > 0.0) {
        std::normal_distribution<double> vel(0.0, sigma_vel);
        out.velocity_north += vel(rng);
        out.velocity_east += vel(rng);
    }
    return out;
}

inline ObstacleEstimate inject_noise(const ObstacleEstimate& truth, double sigma_pos, double sigma_vel,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return inject_noise(truth, sigma_pos, sigma_vel, rng);
}

}  // namespace bcmpc
