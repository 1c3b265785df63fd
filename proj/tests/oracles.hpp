#pragma once

// Test-only oracles, independent of the shooting/quadrature paths they check.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stab/indexform.hpp"
#include "stab/metric.hpp"

namespace oracles {

/// Bessel J0 by its power series (adequate for |x| <= 4).
inline double bessel_j0(double x) {
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

/// First positive zero of J0 by bisection on [2, 3].
inline double bessel_j0_first_zero() {
    double lo = 2.0, hi = 3.0;
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        if (bessel_j0(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Coarse finite-difference eigenvalue of -u'' - (tau'/tau) u' - (V - aK) u
/// on (0, s) with u'(0) = 0, u(s) = 0. Conservative discretization of
/// -(1/tau)(tau u')' symmetrized by sqrt(tau); smallest eigenvalue isolated
/// by a Sturm-count bisection and polished with one inverse-iteration pass.
inline double fd_lambda1(const stab::WarpedMetric& m, const stab::StabilityParams& p,
                         double s, int nodes = 2000) {
    const int n = nodes;
    const double h = s / (n + 1);
    std::vector<double> diag(n), off(n - 1);
    std::vector<double> tau(n), tau_half(n + 1);
    for (int i = 0; i < n; ++i) tau[i] = m.tau((i + 1) * h);
    for (int i = 0; i <= n; ++i) tau_half[i] = m.tau((i + 0.5) * h);

    for (int i = 0; i < n; ++i) {
        const double r = (i + 1) * h;
        double flux = tau_half[i] + tau_half[i + 1];
        if (i == 0) flux -= tau_half[0];  // u'(0) = 0: no flux through r = 1/2 h
        const double K = -m.d2tau(r) / tau[i];
        diag[i] = flux / (h * h * tau[i]) - (p.V(r) - p.a() * K);
    }
    for (int i = 0; i + 1 < n; ++i)
        off[i] = -tau_half[i + 1] / (h * h * std::sqrt(tau[i] * tau[i + 1]));

    // Sturm count: number of eigenvalues below x.
    auto count_below = [&](double x) {
        int cnt = 0;
        double d = diag[0] - x;
        if (d < 0) ++cnt;
        for (int i = 1; i < n; ++i) {
            d = (diag[i] - x) - off[i - 1] * off[i - 1] / (d == 0.0 ? 1e-300 : d);
            if (d < 0) ++cnt;
        }
        return cnt;
    };

    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < n; ++i) {
        const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                              (i + 1 < n ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    while (hi - lo > 1e-10 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    double lambda = 0.5 * (lo + hi);

    // One inverse-iteration pass at a shifted pivot tightens the estimate.
    const double shift = lambda - 1e-6 * std::max(1.0, std::abs(lambda));
    std::vector<double> v(n, 1.0), w(n);
    for (int pass = 0; pass < 2; ++pass) {
        // Thomas solve (T - shift I) w = v
        std::vector<double> c(n), d(n);
        c[0] = (n > 1 ? off[0] : 0.0) / (diag[0] - shift);
        d[0] = v[0] / (diag[0] - shift);
        for (int i = 1; i < n; ++i) {
            const double denom = (diag[i] - shift) - off[i - 1] * c[i - 1];
            c[i] = (i + 1 < n ? off[i] : 0.0) / denom;
            d[i] = (v[i] - off[i - 1] * d[i - 1]) / denom;
        }
        w[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) w[i] = d[i] - c[i] * w[i + 1];
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    // Rayleigh quotient of the converged vector
    double num = 0.0;
    for (int i = 0; i < n; ++i) {
        double tv = diag[i] * v[i];
        if (i > 0) tv += off[i - 1] * v[i - 1];
        if (i + 1 < n) tv += off[i] * v[i + 1];
        num += v[i] * tv;
    }
    return num;
}

}  // namespace oracles
