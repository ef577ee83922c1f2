#pragma once

#include <cstddef>
#include <vector>

namespace eie {

/// Cubic interpolating spline with natural end conditions (zero second
/// derivative at both ends). Knots must be strictly increasing; at least two
/// are required (two knots degenerate to the linear interpolant).
class NaturalCubicSpline {
public:
    NaturalCubicSpline() = default;
    NaturalCubicSpline(std::vector<double> knots, std::vector<double> values);

    /// Evaluates the spline. Outside the knot range the end cubic is extended;
    /// callers that need clamping do it themselves.
    double operator()(double x) const;

    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }
    /// Second derivatives at the knots (zero at both ends by construction).
    const std::vector<double>& curvatures() const { return m_; }

private:
    std::size_t interval(double x) const;

    std::vector<double> x_, y_, m_;
};

/// Periodic cubic spline through n uniformly spaced samples of one period:
/// sample i sits at t = i*period/n and the curve closes smoothly onto itself.
class PeriodicCubicSpline {
public:
    PeriodicCubicSpline(std::vector<double> values, double period);

    /// Evaluates at any real t (reduced modulo the period).
    double operator()(double t) const;

    double period() const { return period_; }

private:
    std::vector<double> y_, m_;
    double period_ = 0.0;
    double h_ = 0.0;
};

} // namespace eie
