#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stab/cutoff.hpp"
#include "stab/metric.hpp"

namespace stab {

/// Data of the operator L = Laplacian + V - a K: the constant a > 0, the
/// radial potential V >= 0, and an optional certified lower bound on V.
class StabilityParams {
public:
    static StabilityParams zero_potential(double a);
    static StabilityParams constant_potential(double a, double c);
    static StabilityParams custom_potential(double a, std::function<double(double)> v,
                                            const std::string& label = "custom");

    double a() const { return a_; }
    double V(double r) const { return v_ ? v_(r) : 0.0; }
    const std::optional<double>& c_lower() const { return c_lower_; }
    const std::string& potential_name() const { return potential_name_; }

    StabilityParams with_c_lower(double c) const;

private:
    double a_ = 0.25;
    std::function<double(double)> v_;
    std::optional<double> c_lower_;
    std::string potential_name_ = "zero";
};

/// Both sides of one displayed inequality plus a labeled term breakdown.
/// slack = rhs - lhs; checks compare slack / max(1, |rhs|) against -1e-8.
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    std::vector<std::pair<std::string, double>> terms;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> flags;

    double normalized_slack() const;
    bool has_flag(const std::string& f) const;
};

/// Global acceptance threshold for normalized slacks.
inline constexpr double kSlackTolerance = -1e-8;

/// I(f) = int (f'^2 - V f^2 + a K f^2) l(r) dr over the support of f,
/// the radial reduction of the index form of L.
double index_form(const WarpedMetric& m, const StabilityParams& p,
                  const CutoffSpec& spec);

/// Colding-Minicozzi stability inequality for a plateau cutoff:
/// I(f) <= 2a (pi G(s) - f'_-(eps) l(eps)) - int V f^2 + int_eps^s F l.
InequalityReport cm_inequality_report(const WarpedMetric& m, const StabilityParams& p,
                                      const CutoffSpec& spec, const ChiProfile& chi);

/// Log-power estimate with the curvature-minimum boundary term and rho^+:
/// I(f) <= 2a (G(s) pi + b (2 pi - Kmin(se^-s))/s) + rho^+ - (potential term).
InequalityReport estimate_report(const WarpedMetric& m, const StabilityParams& p,
                                 const AlphaParams& params, double s,
                                 const ChiProfile& chi = ChiProfile());

enum class MprCertify { Shooting, Assume };

/// Meeks-Perez-Ros bound for the (1-r/s)^b test function:
/// int (1-r/s)^{2b} V <= 2 a pi + b (b(1-4a)+2a)/s^2 int (1-r/s)^{2b-2} l.
/// By default the nonpositivity hypothesis is certified via lambda1 >= 0 and
/// the outcome is flagged in the report.
InequalityReport mpr_inequality(const WarpedMetric& m, const StabilityParams& p,
                                double b, double s,
                                MprCertify certify = MprCertify::Shooting);

/// Annulus test-function bound; rhs must stay nonnegative on stable disks:
/// 0 <= c_a + 2 pi a G(s) + 2a l(s2)/(s-s2) + (1-2a)/(s-s2)^2 int_{s2}^s l.
InequalityReport huber_report(const WarpedMetric& m, const StabilityParams& p,
                              double s0, double s1, double s2, double s,
                              const ChiProfile& chi);

struct T3Result {
    double T = 0.0;
    /// -M + (1-2a) a(s)/s^2 evaluated at the same radius, the large-s limit
    /// shape of T.
    double limit_estimate = 0.0;
};

/// T(s) = 2a (1 - (M+1)(1 - s0/s)^2) + (1-2a) a(s)/s^2.
T3Result t3_functional(const WarpedMetric& m, double a, double M, double s0, double s);

}  // namespace stab
