#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace stab {

/// Thrown when an adaptive routine exhausts its refinement budget.
/// Carries the best value obtained so far and the achieved error estimate.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& msg, double value_, double error_)
        : std::runtime_error(msg), value(value_), error(error_) {}
    double value;
    double error;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_intervals = std::size_t{1} << 20;
};

namespace detail {

// Gauss 7 / Kronrod 15 pair on [-1, 1].
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(F& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kKronrodW[7] * fc;
    double resg = kGaussW[3] * fc;
    double fv[7][2];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGK15Nodes[i];
        fv[i][0] = f(c - dx);
        fv[i][1] = f(c + dx);
        const double sum = fv[i][0] + fv[i][1];
        resk += kKronrodW[i] * sum;
        if (i % 2 == 1) resg += kGaussW[i / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kKronrodW[7] * std::abs(fc - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += kKronrodW[i] *
                  (std::abs(fv[i][0] - reskh) + std::abs(fv[i][1] - reskh));
    resasc *= std::abs(h);
    value = resk * h;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    error = err;
}

struct QuadCell {
    double a, b, value, error;
    bool operator<(const QuadCell& o) const { return error < o.error; }
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integration over [a, b]. Splits the worst interval
/// until sum of local error estimates meets max(abs_tol, rel_tol*|value|).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (a == b) return 0.0;

    std::priority_queue<detail::QuadCell> cells;
    detail::QuadCell first{a, b, 0.0, 0.0};
    detail::gk15(f, a, b, first.value, first.error);
    cells.push(first);
    double total_value = first.value;
    double total_error = first.error;
    std::size_t n = 1;

    const double eps = std::numeric_limits<double>::epsilon();
    while (total_error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total_value))) {
        if (cells.empty() || n >= opt.max_intervals)
            throw IntegrationError(
                "integrate: refinement budget exhausted before reaching tolerance",
                total_value, total_error);
        detail::QuadCell worst = cells.top();
        const double mid = 0.5 * (worst.a + worst.b);
        const double width_floor = 4.0 * eps * (std::abs(worst.a) + std::abs(worst.b));
        if (worst.b - worst.a <= width_floor || mid <= worst.a || mid >= worst.b) {
            // Unrefinable at double precision: keep its contribution, park it.
            cells.pop();
            continue;
        }
        cells.pop();
        total_value -= worst.value;
        total_error -= worst.error;
        detail::QuadCell left{worst.a, mid, 0.0, 0.0};
        detail::QuadCell right{mid, worst.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        total_value += left.value + right.value;
        total_error += left.error + right.error;
        cells.push(left);
        cells.push(right);
        ++n;
    }
    return total_value;
}

/// Integrates over [a, b] splitting mandatorily at the given breakpoints
/// (points outside (a, b) are ignored). Each smooth piece is integrated
/// independently.
template <class F>
double integrate_split(F&& f, double a, double b, std::vector<double> breakpoints,
                       const QuadratureOptions& opt = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate_split: requires a <= b");
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    double total = 0.0;
    double prev = a;
    for (double p : breakpoints) {
        if (p <= prev || p > b) continue;
        total += integrate(f, prev, p, opt);
        prev = p;
    }
    return total;
}

}  // namespace stab
