#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bcmpc {

/// Polynomial of degree <= 4 in local time tau = t - start.
struct PolySegment {
    double start = 0.0;
    std::array<double, 5> coeffs{};

    double value(double tau) const {
        double v = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) v = v * tau + coeffs[k];
        return v;
    }

    double derivative(double tau) const {
        double v = 0.0;
        for (std::size_t k = coeffs.size() - 1; k >= 1; --k) v = v * tau + static_cast<double>(k) * coeffs[k];
        return v;
    }

    /// Same polynomial re-expanded about start + delta.
    PolySegment shifted(double delta) const {
        PolySegment out;
        out.start = start + delta;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            double binom = 1.0;  // C(k, j) for k = j
            double power = 1.0;  // delta^(k - j)
            double acc = 0.0;
            for (std::size_t k = j; k < coeffs.size(); ++k) {
                acc += coeffs[k] * binom * power;
                binom = binom * static_cast<double>(k + 1) / static_cast<double>(k + 1 - j);
                power *= delta;
            }
            out.coeffs[j] = acc;
        }
        return out;
    }
};

/// Continuous-time function on [start, end] made of polynomial pieces.
/// Outside the domain the boundary value is held.
class PiecewisePolynomial {
public:
    PiecewisePolynomial() = default;

    static PiecewisePolynomial constant(double start, double end, double value) {
        PiecewisePolynomial p;
        PolySegment seg;
        seg.start = start;
        seg.coeffs[0] = value;
        p.segments_.push_back(seg);
        p.end_ = end;
        return p;
    }

    /// Linear function from (t0, v0) to (t1, v1).
    static PiecewisePolynomial linear(double t0, double v0, double t1, double v1) {
        PiecewisePolynomial p;
        PolySegment seg;
        seg.start = t0;
        seg.coeffs[0] = v0;
        seg.coeffs[1] = t1 > t0 ? (v1 - v0) / (t1 - t0) : 0.0;
        p.segments_.push_back(seg);
        p.end_ = t1;
        return p;
    }

    bool empty() const { return segments_.empty(); }
    double start() const { return segments_.empty() ? 0.0 : segments_.front().start; }
    double end() const { return end_; }
    const std::vector<PolySegment>& segments() const { return segments_; }

    double operator()(double t) const {
        if (segments_.empty()) return 0.0;
        t = std::clamp(t, start(), end_);
        const PolySegment& seg = segment_at(t);
        return seg.value(t - seg.start);
    }

    double derivative(double t) const {
        if (segments_.empty() || t < start() || t > end_) return 0.0;
        const PolySegment& seg = segment_at(t);
        return seg.derivative(t - seg.start);
    }

    double front_value() const { return (*this)(start()); }
    double back_value() const { return (*this)(end_); }

    /// Appends a piece starting at end(); zero-length pieces are dropped.
    void push_back(const PolySegment& seg, double seg_end) {
        if (!segments_.empty() && std::abs(seg.start - end_) > 1e-9)
            throw std::invalid_argument("PiecewisePolynomial: segment does not start at current end");
        if (seg_end <= seg.start) return;
        segments_.push_back(seg);
        end_ = seg_end;
    }

    void append(const PiecewisePolynomial& other) {
        for (std::size_t i = 0; i < other.segments_.size(); ++i) {
            double seg_end = i + 1 < other.segments_.size() ? other.segments_[i + 1].start : other.end_;
            push_back(other.segments_[i], seg_end);
        }
    }

    /// Antiderivative F with F(start) = initial_value. Requires degree <= 3.
    PiecewisePolynomial antiderivative(double initial_value) const {
        PiecewisePolynomial out;
        double acc = initial_value;
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            const PolySegment& seg = segments_[i];
            if (seg.coeffs[4] != 0.0) throw std::logic_error("antiderivative: degree exceeds 3");
            PolySegment integ;
            integ.start = seg.start;
            integ.coeffs[0] = acc;
            for (std::size_t k = 0; k + 1 < seg.coeffs.size(); ++k)
                integ.coeffs[k + 1] = seg.coeffs[k] / static_cast<double>(k + 1);
            double seg_end = i + 1 < segments_.size() ? segments_[i + 1].start : end_;
            out.segments_.push_back(integ);
            out.end_ = seg_end;
            acc = integ.value(seg_end - seg.start);
        }
        return out;
    }

    /// Pointwise sum over the common domain of both operands.
    friend PiecewisePolynomial operator+(const PiecewisePolynomial& a, const PiecewisePolynomial& b) {
        if (a.empty()) return b;
        if (b.empty()) return a;
        std::vector<double> knots;
        for (const auto& s : a.segments_) knots.push_back(s.start);
        for (const auto& s : b.segments_) knots.push_back(s.start);
        const double lo = std::max(a.start(), b.start());
        const double hi = std::min(a.end(), b.end());
        knots.push_back(lo);
        std::erase_if(knots, [&](double k) { return k < lo || k >= hi; });
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

        PiecewisePolynomial out;
        for (std::size_t i = 0; i < knots.size(); ++i) {
            const double t = knots[i];
            const PolySegment& sa = a.segment_at(t);
            const PolySegment& sb = b.segment_at(t);
            PolySegment sum = sa.shifted(t - sa.start);
            PolySegment other = sb.shifted(t - sb.start);
            for (std::size_t k = 0; k < sum.coeffs.size(); ++k) sum.coeffs[k] += other.coeffs[k];
            sum.start = t;
            out.segments_.push_back(sum);
        }
        out.end_ = hi;
        return out;
    }

private:
    const PolySegment& segment_at(double t) const {
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double v, const PolySegment& s) { return v < s.start; });
        if (it == segments_.begin()) return segments_.front();
        return *std::prev(it);
    }

    std::vector<PolySegment> segments_;
    double end_ = 0.0;
};

}  // namespace bcmpc
