#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace stab {

/// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }

private:
    std::size_t segment(double t) const;

    std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

inline CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n != y_.size() || n < 3)
        throw std::invalid_argument("CubicSpline: need at least 3 matching samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("CubicSpline: abscissae must be strictly increasing");

    // Solve the tridiagonal system for natural end conditions.
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
    diag[0] = diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        sub[i] = hl;
        diag[i] = 2.0 * (hl + hr);
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    // Forward elimination (upper coefficient at row i is hr, zero at the ends).
    std::vector<double> up(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) up[i] = x_[i + 1] - x_[i];
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m_[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        m_[i] = (rhs[i] - up[i] * m_[i + 1]) / diag[i];
}

inline std::size_t CubicSpline::segment(double t) const {
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (x_[mid] <= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

inline double CubicSpline::operator()(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h;
    const double B = (t - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

inline double CubicSpline::derivative(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h;
    const double B = (t - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h -
           (3.0 * A * A - 1.0) * h * m_[i] / 6.0 +
           (3.0 * B * B - 1.0) * h * m_[i + 1] / 6.0;
}

inline double CubicSpline::second_derivative(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h;
    const double B = (t - x_[i]) / h;
    return A * m_[i] + B * m_[i + 1];
}

}  // namespace stab
