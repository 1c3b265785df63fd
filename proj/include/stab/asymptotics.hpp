#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stab/cutoff.hpp"
#include "stab/metric.hpp"

namespace stab {

/// rho^+_{a,b}(delta, s), the area-weighted remainder of the log-power
/// cutoff estimate:
///   2ab alpha^{2b-1} e^{2 alpha} ( A(se^{-alpha}, s)
///     - (delta e^{2 delta}/alpha)(1+delta/alpha)^{2(b-1)} A(se^{-s}, se^{-(alpha+delta)}) ) / s^{2(b+1)}.
double rho_plus(const WarpedMetric& m, double a, double b, double delta, double s);

/// rho~^+_{alpha,k}(delta) = 1 - e^{-k alpha} (1 + e^{(2-k) delta} (delta/alpha)
/// (1 + delta/alpha)^{2(b-1)}), the scale-free large-s shape of rho^+.
double rho_tilde(double alpha, double b, double k, double delta);

struct Delta0Result {
    double delta0 = 0.0;
    double rho_min = 0.0;
    /// Set when the minimizer lands on a bracket endpoint; expected for
    /// k <= 2 where the infimum over delta > 0 is not attained.
    bool boundary_flag = false;
};

/// Golden-section minimization of rho_tilde over [lo, hi].
Delta0Result delta0_minimizer(double alpha, double b, double k, double lo = 1e-3,
                              double hi = 10.0, double tol = 1e-8);

struct GrowthFit {
    double k_hat = 0.0;
    double C_hat = 0.0;
    double residual = 0.0;  // RMS log-log fit error
    double s_lo = 0.0, s_hi = 0.0;
    /// Cleared when the window shows drift or a large residual (no finite
    /// power-law growth, e.g. exponential area growth).
    bool power_law = false;
};

/// Least-squares fit of log a(s) = log C + k log s over log-spaced samples.
GrowthFit aag_fit(const WarpedMetric& m, double s_lo, double s_hi, int samples = 32);

/// Exact growth data (k, C) with a(s) ~ C s^k for registry metrics that have
/// it; nullopt otherwise (exponential growth, bounded domain, custom).
struct GrowthLaw {
    double k = 0.0;
    double C = 0.0;
};
std::optional<GrowthLaw> registry_growth(const WarpedMetric& m);

/// rho^+(delta, s) / (C^+ s^{k - 2(b+1)} rho~(delta)) along the grid; tends
/// to 1 for metrics with exact power-law growth.
std::vector<double> asymptotic_ratio(const WarpedMetric& m, double a, double b,
                                     double delta, std::span<const double> s_grid);

/// Assembled asymptotics record: C^+ = 2 a b C alpha^{2b-1} e^{2 alpha},
/// the delta minimizer, and its bracket.
struct RhoAsymptotics {
    double a = 0.0, b = 0.0, alpha = 0.0;
    double k = 0.0, C = 0.0;
    double C_plus = 0.0;
    double delta0 = 0.0;
    double rho_min = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    bool boundary_flag = false;
};

RhoAsymptotics make_rho_asymptotics(const WarpedMetric& m, double a, double b,
                                    double bracket_lo = 1e-3, double bracket_hi = 10.0);

}  // namespace stab
