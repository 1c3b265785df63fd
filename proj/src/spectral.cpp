#include "stab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stab/numerics.hpp"
#include "stab/ode.hpp"
#include "stab/quadrature.hpp"

namespace stab {

namespace {

constexpr double kPi = std::numbers::pi;

struct RadialOde {
    const WarpedMetric* m;
    const StabilityParams* p;
    double lambda;

    std::array<double, 2> operator()(double r, const std::array<double, 2>& y) const {
        const double t = m->tau(r);
        const double q = p->V(r) + lambda - p->a() * (-m->d2tau(r) / t);
        return {y[1], -(m->dtau(r) / t) * y[1] - q * y[0]};
    }
};

/// Initial data just off the origin. For profiles smooth at the origin the
/// radial Laplacian contributes a factor 2 there, giving the second-order
/// start u(h) = 1 - q(0) h^2 / 4.
std::array<double, 2> start_state(const WarpedMetric& m, const StabilityParams& p,
                                  double lambda, double r_start) {
    if (m.smooth_origin()) {
        const double t = m.tau(r_start);
        const double K0 = t > 0 ? -m.d2tau(r_start) / t : 0.0;
        const double q0 = p.V(r_start) + lambda - p.a() * K0;
        return {1.0 - q0 * r_start * r_start / 4.0, -q0 * r_start / 2.0};
    }
    return {1.0, 0.0};
}

std::optional<double> first_zero(const WarpedMetric& m, const StabilityParams& p,
                                 double R_max, double lambda) {
    const double r_start = std::max(m.r_min(), 1e-6);
    if (!(R_max > r_start)) return std::nullopt;
    RadialOde ode{&m, &p, lambda};
    OdeOptions opt;
    opt.max_step = std::max(0.25, (R_max - r_start) / 64.0);
    const OdeResult2 res =
        integrate_dopri5(ode, r_start, R_max, start_state(m, p, lambda, r_start), opt);
    return res.first_zero;
}

/// Largest a with no zero before R (bisected to tol); nullopt when every
/// tested a up to the cap stays zero-free.
struct Threshold {
    double lo = 0.0;
    double hi = 0.0;
    std::optional<double> witness_zero;
};

std::optional<Threshold> bisect_threshold(const WarpedMetric& m, double R, double tol,
                                          double a_cap) {
    auto has_zero = [&](double a) {
        const StabilityParams p = StabilityParams::zero_potential(a);
        return first_zero(m, p, R, 0.0);
    };
    double hi = 0.5;
    std::optional<double> witness;
    while (true) {
        witness = has_zero(hi);
        if (witness) break;
        hi *= 2.0;
        if (hi > a_cap) return std::nullopt;
    }
    double lo = hi * 0.5;
    while (lo > tol) {
        const auto z = has_zero(lo);
        if (!z) break;
        hi = lo;
        witness = z;
        lo *= 0.5;
    }
    Threshold th;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (auto z = has_zero(mid)) {
            hi = mid;
            witness = z;
        } else {
            lo = mid;
        }
    }
    th.lo = lo;
    th.hi = hi;
    th.witness_zero = witness;
    return th;
}

}  // namespace

std::optional<double> shoot_positive_solution(const WarpedMetric& m,
                                              const StabilityParams& p, double R_max,
                                              double lambda) {
    m.require_in_domain(R_max);
    return first_zero(m, p, R_max, lambda);
}

SpectralResult estimate_a0(const WarpedMetric& m, double R_max, double tol) {
    m.require_in_domain(R_max);
    if (!(tol > 0)) throw std::invalid_argument("estimate_a0: tol must be positive");
    constexpr double kCap = 1024.0;

    SpectralResult res;
    res.R_max = R_max;
    res.tol = tol;

    // Sturm monotonicity in a needs K <= 0 throughout.
    bool k_nonpositive = true;
    const double grid_hi = std::min(R_max, m.r_max());
    for (int i = 1; i <= 512; ++i) {
        const double r = m.r_min() + (grid_hi - m.r_min()) * i / 513.0;
        if (r <= m.r_min() || r >= m.r_max()) continue;
        if (curvature(m, r) > 1e-12) {
            k_nonpositive = false;
            break;
        }
    }

    if (!k_nonpositive) {
        // Grid scan, no bisection guarantee.
        res.monotone_bisection = false;
        double last_feasible = 0.0;
        double first_infeasible = 0.0;
        for (double a = tol; a <= kCap; a *= 2.0) {
            const StabilityParams p = StabilityParams::zero_potential(a);
            if (auto z = first_zero(m, p, R_max, 0.0)) {
                first_infeasible = a;
                res.first_zero = z;
                break;
            }
            last_feasible = a;
        }
        res.a0_low = last_feasible;
        res.a0_high = first_infeasible > 0 ? first_infeasible
                                           : std::numeric_limits<double>::infinity();
        res.unbounded = first_infeasible == 0.0;
        res.refined_low = res.a0_low;
        res.refined_high = res.a0_high;
        return res;
    }

    const auto th1 = bisect_threshold(m, R_max, tol / 8.0, kCap);
    if (!th1) {
        res.unbounded = true;
        res.a0_low = kCap;
        res.a0_high = std::numeric_limits<double>::infinity();
        res.refined_low = res.a0_low;
        res.refined_high = res.a0_high;
        return res;
    }
    res.a0_low = th1->lo;
    res.a0_high = th1->hi;
    res.first_zero = th1->witness_zero;

    const double R2 = std::min(2.0 * R_max, std::nextafter(m.r_max(), 0.0));
    const auto th2 = bisect_threshold(m, R2, tol / 8.0, kCap);
    if (th2) {
        res.threshold2_low = th2->lo;
        res.threshold2_high = th2->hi;
        const double t1 = 0.5 * (th1->lo + th1->hi);
        const double t2 = 0.5 * (th2->lo + th2->hi);
        res.convergence_gap = t1 - t2;
        // Threshold error decays like 1/R^2; eliminate the leading term.
        const double extrapolated = t2 - (t1 - t2) / 3.0;
        res.refined_low = extrapolated - 0.4999 * tol;
        res.refined_high = extrapolated + 0.4999 * tol;
    } else {
        res.refined_low = res.a0_low;
        res.refined_high = res.a0_high;
    }
    return res;
}

double lambda1(const WarpedMetric& m, const StabilityParams& p, double s, double tol) {
    m.require_in_domain(s);
    auto zero_before_s = [&](double lam) {
        const auto z = first_zero(m, p, s, lam);
        return z.has_value() && *z < s;
    };

    // Bracket: zeros move inward as lambda grows.
    double hi = 1.0;
    while (!zero_before_s(hi)) {
        hi *= 2.0;
        if (hi > 1e12)
            throw OdeError("lambda1: no oscillation found up to lambda = 1e12", s);
    }
    double lo = -1.0;
    while (zero_before_s(lo)) {
        lo *= 2.0;
        if (lo < -1e12)
            throw OdeError("lambda1: operator unbounded below on the grid", s);
    }
    while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (zero_before_s(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

SpectralResult lambda1_curve(const WarpedMetric& m, const StabilityParams& p,
                             std::span<const double> s_grid, int jobs) {
    SpectralResult res;
    res.lambda1_curve.resize(s_grid.size());
    parallel_for_indexed(s_grid.size(), jobs, [&](std::size_t i) {
        res.lambda1_curve[i] = {s_grid[i], lambda1(m, p, s_grid[i])};
    });
    if (!s_grid.empty()) res.R_max = s_grid.back();
    return res;
}

std::vector<std::pair<double, std::optional<double>>> a_scan(
    const WarpedMetric& m, std::span<const double> a_values, double R_max) {
    std::vector<std::pair<double, std::optional<double>>> out(a_values.size());
    for (std::size_t i = 0; i < a_values.size(); ++i) {
        const StabilityParams p = StabilityParams::zero_potential(a_values[i]);
        out[i] = {a_values[i], first_zero(m, p, R_max, 0.0)};
    }
    return out;
}

DistanceBoundResult distance_bound(const WarpedMetric& m, const StabilityParams& p,
                                   double b, double s_start, double s_cap,
                                   double beta) {
    if (!(beta > 1.0))
        throw std::invalid_argument("distance_bound: beta > 1 required");
    // Without a certified lower bound the potential side degenerates to 0 and
    // the scan reports no-bound-found.
    const double c = p.c_lower().value_or(0.0);
    const double a = p.a();

    DistanceBoundResult out;
    out.scan_cap = s_cap;

    // Growth degree: closed form when the registry has one, fit otherwise.
    double k;
    if (auto law = registry_growth(m)) {
        k = law->k;
        out.k_hat = k;
    } else {
        const double hi = std::min(s_cap, 0.9 * m.r_max());
        const GrowthFit fit = aag_fit(m, hi / 100.0, hi);
        k = fit.k_hat;
        out.k_hat = k;
    }

    double delta0 = 0.0;
    if (k <= 2.0) {
        out.method = "mpr";
        out.b_used = 1.0;
    } else {
        out.method = "estimatepos";
        // Valid range: 2(b+1) >= k > 2b and b > 1.
        const double b_lo = std::max(1.0, k / 2.0 - 1.0);
        const double b_hi = k / 2.0;
        if (!(b > b_lo) || !(2.0 * (b + 1.0) >= k))
            b = 0.5 * (b_lo + b_hi);
        out.b_used = b;
        const AlphaParams ap = AlphaParams::make(a, b, 1.0);
        if (!(ap.alpha > 0))
            throw std::invalid_argument("distance_bound: alpha > 0 violated");
        delta0 = delta0_minimizer(ap.alpha, b, k).delta0;
    }

    auto slack = [&](double s) -> double {
        if (out.method == "mpr") {
            const InequalityReport rep =
                mpr_inequality(m, p, out.b_used, s, MprCertify::Assume);
            const double lhs_bound = c * disk_area(m, s / 2.0) / 4.0;
            return rep.rhs - lhs_bound;
        }
        const AlphaParams ap = AlphaParams::make(a, out.b_used, delta0);
        const double eps = s * std::exp(-s);
        const double kmin = kmin_profile(m, eps);
        const double rho = rho_plus(m, a, out.b_used, delta0, s);
        const double rhs =
            2.0 * a * (kPi + out.b_used * (2.0 * kPi - kmin) / s) + rho;
        const double lhs = c * std::pow(beta / s, 2.0 * out.b_used) *
                           disk_area(m, s * std::exp(-beta));
        (void)ap;
        return rhs - lhs;
    };

    // The estimate route needs s > alpha + delta0.
    double s_lo = s_start;
    if (out.method == "estimatepos") {
        const AlphaParams ap = AlphaParams::make(a, out.b_used, delta0);
        s_lo = std::max(s_lo, (ap.alpha + delta0) * 1.1);
    }
    s_lo = std::min(s_lo, s_cap);

    out.slack_at_start = slack(s_lo);
    if (out.slack_at_start < 0) {
        out.found = true;
        out.failure_s = s_lo;
        out.s_star = s_lo;
        out.slack_at_failure = out.slack_at_start;
        return out;
    }
    double prev = s_lo;
    for (double s = s_lo * 1.05; s <= s_cap * 1.05; s *= 1.05) {
        s = std::min(s, s_cap);
        if (slack(s) < 0) {
            // Refine the crossing.
            double lo = prev, hi = s;
            while (hi - lo > 1e-3 * std::max(1.0, lo)) {
                const double mid = 0.5 * (lo + hi);
                if (slack(mid) < 0)
                    hi = mid;
                else
                    lo = mid;
            }
            out.found = true;
            out.failure_s = hi;
            out.s_star = hi;
            out.slack_at_failure = slack(hi);
            return out;
        }
        prev = s;
        if (s >= s_cap) break;
    }
    out.failure_s = s_cap;
    out.s_star = s_cap;
    return out;
}

PotentialGrowthReport potential_growth_check(const WarpedMetric& m,
                                             const StabilityParams& p, double b,
                                             std::span<const double> s_grid) {
    if (!(b >= 1.0))
        throw std::invalid_argument("potential_growth_check: b >= 1 required");
    PotentialGrowthReport rep;
    rep.b = b;
    if (auto law = registry_growth(m)) rep.k_le_2 = law->k <= 2.0;

    for (double s : s_grid) {
        PotentialGrowthRow row;
        row.s = s;
        row.potential_integral =
            integrate([&](double r) { return p.V(r) * 2.0 * kPi * m.tau(r); },
                      m.r_min(), s);
        row.ratio = row.potential_integral / std::pow(s, 2.0 * b);
        row.lambda1 = lambda1(m, p, s);
        if (row.lambda1 < 0) rep.hypothesis_ok = false;
        rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
        rep.rows.push_back(row);
    }
    return rep;
}

CurvatureIntegrabilityReport curvature_integrability_report(const WarpedMetric& m,
                                                            double R_max) {
    m.require_in_domain(R_max);
    CurvatureIntegrabilityReport rep;
    rep.R_max = R_max;
    rep.two_pi_chi = 2.0 * kPi;  // geodesic disk model, chi = 1

    // Split at sign changes of K found on a grid.
    const double lo = m.curvature_quad_start();
    std::vector<double> splits;
    const int n = 1024;
    double prev_r = 0.0, prev_k = 0.0;
    bool have_prev = false;
    for (int i = 0; i <= n; ++i) {
        const double r = lo + (R_max - lo) * i / n;
        if (r <= m.r_min() || r >= m.r_max()) continue;
        const double K = curvature(m, r);
        if (have_prev && ((prev_k < 0) != (K < 0)))
            splits.push_back(bisect_root(
                [&](double t) { return curvature(m, t); }, prev_r, r, 1e-12));
        prev_r = r;
        prev_k = K;
        have_prev = true;
    }

    auto kpos = [&](double r) {
        return 2.0 * kPi * std::max(-m.d2tau(r), 0.0);
    };
    auto kneg = [&](double r) {
        return 2.0 * kPi * std::min(-m.d2tau(r), 0.0);
    };
    rep.K_plus = integrate_split(kpos, lo, R_max, splits);
    rep.K_minus = integrate_split(kneg, lo, R_max, splits);
    rep.K_total = rep.K_plus + rep.K_minus;
    rep.integral_in_range = rep.K_total >= -1e-8 && rep.K_total <= rep.two_pi_chi + 1e-8;

    if (std::isinf(m.r_max()) && R_max / 10.0 > std::max(1.0, m.r_min())) {
        rep.growth = aag_fit(m, R_max / 10.0, R_max);
        rep.quadratic_growth =
            rep.growth->power_law && std::abs(rep.growth->k_hat - 2.0) <= 0.05;
    }
    return rep;
}

}  // namespace stab
