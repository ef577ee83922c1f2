#include "eie/spline.hpp"

#include "eie/errors.hpp"

#include <algorithm>
#include <cmath>

namespace eie {

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> knots, std::vector<double> values)
    : x_(std::move(knots)), y_(std::move(values)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw ValidationError("cubic spline needs >= 2 knots and matching values");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw ValidationError("cubic spline knots must be strictly increasing");

    m_.assign(n, 0.0);
    if (n == 2) return; // linear segment, both curvatures stay zero

    // Tridiagonal system for the interior second derivatives, natural ends.
    const std::size_t k = n - 2;
    std::vector<double> diag(k), rhs(k), sup(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double hl = x_[i + 1] - x_[i];
        const double hr = x_[i + 2] - x_[i + 1];
        diag[i] = 2.0 * (hl + hr);
        sup[i] = hr;
        rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / hr - (y_[i + 1] - y_[i]) / hl);
    }
    // Thomas elimination (sub-diagonal of row i is h between knots i and i+1).
    for (std::size_t i = 1; i < k; ++i) {
        const double sub = x_[i + 1] - x_[i];
        const double w = sub / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m_[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t i = k - 1; i > 0; --i)
        m_[i] = (rhs[i - 1] - sup[i - 1] * m_[i + 1]) / diag[i - 1];
}

std::size_t NaturalCubicSpline::interval(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double NaturalCubicSpline::operator()(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h) / 6.0;
}

PeriodicCubicSpline::PeriodicCubicSpline(std::vector<double> values, double period)
    : y_(std::move(values)), period_(period) {
    const std::size_t n = y_.size();
    if (n < 3) throw ValidationError("periodic spline needs >= 3 samples");
    if (!(period > 0.0)) throw ValidationError("periodic spline needs a positive period");
    h_ = period_ / static_cast<double>(n);

    // Cyclic tridiagonal system (1, 4, 1) for the knot curvatures,
    // solved with the Sherman-Morrison corner correction.
    std::vector<double> d(n);
    const double s = 6.0 / (h_ * h_);
    for (std::size_t i = 0; i < n; ++i) {
        const double ym = y_[(i + n - 1) % n];
        const double yp = y_[(i + 1) % n];
        d[i] = s * (ym - 2.0 * y_[i] + yp);
    }

    const double gamma = -4.0;
    std::vector<double> diag(n, 4.0);
    diag[0] -= gamma;              // 8
    diag[n - 1] -= 1.0 / gamma;    // 4.25

    auto thomas = [&](std::vector<double> rhs) {
        std::vector<double> dd = diag;
        for (std::size_t i = 1; i < n; ++i) {
            const double w = 1.0 / dd[i - 1];
            dd[i] -= w;
            rhs[i] -= w * rhs[i - 1];
        }
        rhs[n - 1] /= dd[n - 1];
        for (std::size_t i = n - 1; i > 0; --i)
            rhs[i - 1] = (rhs[i - 1] - rhs[i]) / dd[i - 1];
        return rhs;
    };

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = 1.0;
    const std::vector<double> x = thomas(d);
    const std::vector<double> z = thomas(u);
    const double fact = (x[0] + x[n - 1] / gamma) / (1.0 + z[0] + z[n - 1] / gamma);

    m_.resize(n);
    for (std::size_t i = 0; i < n; ++i) m_[i] = x[i] - fact * z[i];
}

double PeriodicCubicSpline::operator()(double t) const {
    const std::size_t n = y_.size();
    double u = std::fmod(t, period_);
    if (u < 0.0) u += period_;
    std::size_t j = static_cast<std::size_t>(u / h_);
    if (j >= n) j = n - 1;
    const std::size_t jp = (j + 1) % n;
    const double a = ((static_cast<double>(j) + 1.0) * h_ - u) / h_;
    const double b = (u - static_cast<double>(j) * h_) / h_;
    return a * y_[j] + b * y_[jp] +
           ((a * a * a - a) * m_[j] + (b * b * b - b) * m_[jp]) * (h_ * h_) / 6.0;
}

} // namespace eie
