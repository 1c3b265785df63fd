#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stab/asymptotics.hpp"
#include "stab/indexform.hpp"
#include "stab/metric.hpp"

namespace stab {

/// Output of the critical-constant estimate. a0_low/a0_high bracket the
/// radius-R_max feasibility threshold (an upper bound for the critical
/// constant, nonincreasing in R_max). refined_low/refined_high bracket the
/// constant itself, obtained by second-order extrapolation of the thresholds
/// at R_max and 2 R_max; the gap between the two radii is the convergence
/// indicator.
struct SpectralResult {
    double a0_low = 0.0;
    double a0_high = 0.0;
    double threshold2_low = 0.0;   // bracket at 2 R_max
    double threshold2_high = 0.0;
    double refined_low = 0.0;
    double refined_high = 0.0;
    double convergence_gap = 0.0;  // threshold(R_max) - threshold(2 R_max)
    std::optional<double> first_zero;  // witness zero at a0_high
    std::vector<std::pair<double, double>> lambda1_curve;
    double R_max = 0.0;
    double tol = 0.0;
    bool monotone_bisection = true;  // false -> grid scan fallback (K changes sign)
    bool unbounded = false;          // no infeasible a found up to the scan cap
};

/// Integrates u'' + (tau'/tau) u' + (V - aK + lambda) u = 0 outward from the
/// origin with regular initial data; returns the first zero of u in
/// (r_start, R_max], or nullopt when u stays positive.
std::optional<double> shoot_positive_solution(const WarpedMetric& m,
                                              const StabilityParams& p, double R_max,
                                              double lambda = 0.0);

/// Critical constant estimate by bisection on a (V plays no role here).
/// Requires K <= 0 on the domain for the Sturm monotonicity that backs the
/// bisection; otherwise falls back to a flagged grid scan.
SpectralResult estimate_a0(const WarpedMetric& m, double R_max, double tol);

/// First Dirichlet eigenvalue of -L on D(s): the lambda placing the first
/// zero of the shooting solution exactly at s.
double lambda1(const WarpedMetric& m, const StabilityParams& p, double s,
               double tol = 1e-9);

/// Fills lambda1_curve over the grid (parallel across radii, index order).
SpectralResult lambda1_curve(const WarpedMetric& m, const StabilityParams& p,
                             std::span<const double> s_grid, int jobs = 1);

/// Feasibility scan: first zero of the shooting solution (or none) per a.
std::vector<std::pair<double, std::optional<double>>> a_scan(
    const WarpedMetric& m, std::span<const double> a_values, double R_max);

struct DistanceBoundResult {
    bool found = false;
    double s_star = 0.0;      // certified inradius bound (== failure_s)
    double failure_s = 0.0;   // radius where the stability inequality fails
    std::string method;       // "mpr" | "estimatepos"
    double slack_at_start = 0.0;
    double slack_at_failure = 0.0;
    double scan_cap = 0.0;
    double b_used = 0.0;
    double k_hat = 0.0;
};

/// Scans s upward until the method-selected stability inequality fails;
/// requires a certified positive lower bound c on V. Growth degree k <= 2
/// routes through the Meeks-Perez-Ros bound, k > 2 through the log-power
/// estimate with 2(b+1) >= k > 2b.
DistanceBoundResult distance_bound(const WarpedMetric& m, const StabilityParams& p,
                                   double b, double s_start, double s_cap,
                                   double beta = 2.0);

struct PotentialGrowthRow {
    double s = 0.0;
    double potential_integral = 0.0;
    double ratio = 0.0;  // potential_integral / s^{2b}
    double lambda1 = 0.0;
};

struct PotentialGrowthReport {
    std::vector<PotentialGrowthRow> rows;
    double sup_ratio = 0.0;
    double b = 0.0;
    bool hypothesis_ok = true;  // lambda1 >= 0 certified on every grid disk
    bool k_le_2 = false;
};

/// sup over the grid of int_{D(s)} V / s^{2b}, with per-disk lambda1
/// certification of the nonpositivity hypothesis.
PotentialGrowthReport potential_growth_check(const WarpedMetric& m,
                                             const StabilityParams& p, double b,
                                             std::span<const double> s_grid);

struct CurvatureIntegrabilityReport {
    double K_plus = 0.0;   // int max(K, 0)
    double K_minus = 0.0;  // int min(K, 0)
    double K_total = 0.0;
    double two_pi_chi = 0.0;
    double R_max = 0.0;
    bool integral_in_range = false;  // 0 <= K_total <= 2 pi chi
    std::optional<GrowthFit> growth;  // absent for bounded domains
    bool quadratic_growth = false;
};

/// Positive/negative curvature mass over D(R_max) juxtaposed against the
/// integrability and quadratic-growth conclusions.
CurvatureIntegrabilityReport curvature_integrability_report(const WarpedMetric& m,
                                                            double R_max);

}  // namespace stab
