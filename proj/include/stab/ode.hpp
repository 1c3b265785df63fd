#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace stab {

/// Thrown when the adaptive step size underflows (e.g. near a strong
/// singularity of the coefficients). Carries the last reliable abscissa.
class OdeError : public std::runtime_error {
public:
    OdeError(const std::string& msg, double last_t)
        : std::runtime_error(msg), last_reliable_t(last_t) {}
    double last_reliable_t;
};

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 -> heuristic
    long max_steps = 4'000'000;
    double root_tol = 1e-10;  // absolute tolerance for the zero abscissa
};

struct OdeResult2 {
    std::optional<double> first_zero;  // first root of y[0] in (t0, t1]
    std::array<double, 2> y_end{};
    double t_end = 0.0;
    long steps = 0;
};

/// Dormand-Prince 5(4) for a two-component system with the standard
/// quartic dense output. Integrates y' = rhs(t, y) from t0 to t1 and locates
/// the first downward zero crossing of y[0] by bisection on the dense output.
template <class RHS>
OdeResult2 integrate_dopri5(RHS&& rhs, double t0, double t1,
                            std::array<double, 2> y0, const OdeOptions& opt = {}) {
    using V = std::array<double, 2>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0,
                     d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0,
                     d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0,
                     d7 = 69997945.0 / 29380423.0;

    if (!(t1 > t0)) throw std::invalid_argument("integrate_dopri5: requires t1 > t0");

    OdeResult2 res;
    double t = t0;
    V y = y0;
    V k1 = rhs(t, y);

    double h = opt.initial_step;
    if (h <= 0.0) {
        h = std::min({(t1 - t0) * 1e-4, opt.max_step,
                      t0 > 0 ? 0.1 * t0 : (t1 - t0) * 1e-4});
        h = std::max(h, 1e-14 * (t1 - t0));
    }

    auto dense = [](const V& yn, const V& yn1, const V& k_1, const V& k_last,
                    const V& c5v, double hstep, double theta, int comp) {
        const double ydiff = yn1[comp] - yn[comp];
        const double bspl = hstep * k_1[comp] - ydiff;
        const double cont3 = bspl;
        const double cont4 = ydiff - hstep * k_last[comp] - bspl;
        return yn[comp] +
               theta * (ydiff + (1.0 - theta) *
                                    (cont3 + theta * (cont4 + (1.0 - theta) * c5v[comp])));
    };

    const double t_eps = 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(t1));
    while (t < t1 - t_eps) {
        if (++res.steps > opt.max_steps)
            throw OdeError("integrate_dopri5: step budget exhausted", t);
        h = std::min({h, opt.max_step, t1 - t});
        if (!(h > std::abs(t) * std::numeric_limits<double>::epsilon() * 4.0 + 1e-300))
            throw OdeError("integrate_dopri5: step size underflow", t);

        V k2, k3, k4, k5, k6, k7, y1;
        auto stage = [&](double ci, const V& incr) {
            V yt{y[0] + h * incr[0], y[1] + h * incr[1]};
            return rhs(t + ci * h, yt);
        };
        k2 = stage(c2, {a21 * k1[0], a21 * k1[1]});
        k3 = stage(c3, {a31 * k1[0] + a32 * k2[0], a31 * k1[1] + a32 * k2[1]});
        k4 = stage(c4, {a41 * k1[0] + a42 * k2[0] + a43 * k3[0],
                        a41 * k1[1] + a42 * k2[1] + a43 * k3[1]});
        k5 = stage(c5, {a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0],
                        a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1]});
        k6 = stage(1.0, {a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0],
                         a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1]});
        for (int i = 0; i < 2; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                b6 * k6[i]);
        k7 = rhs(t + h, y1);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sk =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (ei / sk) * (ei / sk);
        }
        err = std::sqrt(err / 2.0);

        if (err <= 1.0) {  // accept
            V c5v;
            for (int i = 0; i < 2; ++i)
                c5v[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                              d6 * k6[i] + d7 * k7[i]);

            // Zero crossing of y[0]: check step end and a few interior
            // samples of the dense output.
            double prev_theta = 0.0;
            double prev_val = y[0];
            bool found = false;
            double lo = 0.0, hi = 0.0;
            for (int j = 1; j <= 4; ++j) {
                const double theta = j / 4.0;
                const double val = (j == 4)
                                       ? y1[0]
                                       : dense(y, y1, k1, k7, c5v, h, theta, 0);
                if (prev_val > 0.0 && val <= 0.0) {
                    lo = prev_theta;
                    hi = theta;
                    found = true;
                    break;
                }
                prev_theta = theta;
                prev_val = val;
            }
            if (found) {
                while ((hi - lo) * h > opt.root_tol) {
                    const double mid = 0.5 * (lo + hi);
                    const double val = dense(y, y1, k1, k7, c5v, h, mid, 0);
                    if (val > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                res.first_zero = t + 0.5 * (lo + hi) * h;
                res.y_end = y1;
                res.t_end = t + h;
                return res;
            }

            t += h;
            y = y1;
            k1 = k7;  // FSAL
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= fac;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    res.y_end = y;
    res.t_end = t;
    return res;
}

}  // namespace stab
