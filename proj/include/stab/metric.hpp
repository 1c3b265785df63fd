#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stab/spline.hpp"

namespace stab {

enum class MetricKind { Euclidean, Hyperbolic, Sphere, Cone, Schoen, Custom };

/// Rotationally symmetric metric dr^2 + tau(r)^2 dtheta^2 on [r_min, r_max).
/// The registry kinds carry closed-form tau with analytic derivatives; custom
/// profiles fall back to central finite differences.
class WarpedMetric {
public:
    static WarpedMetric euclidean();
    static WarpedMetric hyperbolic(double kappa);
    static WarpedMetric sphere(double kappa);
    static WarpedMetric cone(double beta);
    static WarpedMetric schoen(double eps);
    static WarpedMetric custom(std::function<double(double)> tau, double r_min,
                               double r_max, const std::string& label = "custom");
    /// Custom profile with exact derivative closures (e.g. from a spline);
    /// avoids the finite-difference noise floor in curvature quadratures.
    static WarpedMetric custom_with_derivatives(std::function<double(double)> tau,
                                                std::function<double(double)> dtau,
                                                std::function<double(double)> d2tau,
                                                double r_min, double r_max,
                                                const std::string& label = "custom");
    /// CSV rows "r,tau" (optionally with a header), at least 64 rows, strictly
    /// increasing r, positive tau; cubic interpolation in between.
    static WarpedMetric from_csv(const std::string& path);

    MetricKind kind() const { return kind_; }
    double param() const { return param_; }
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }  // +inf when unbounded
    bool smooth_origin() const { return smooth_origin_; }
    bool analytic() const { return kind_ != MetricKind::Custom; }
    const std::string& name() const { return name_; }

    double tau(double r) const;
    double dtau(double r) const;
    double d2tau(double r) const;

    /// Lower quadrature limit for curvature integrals (shifted off the apex
    /// for profiles whose tau'' is singular at the origin).
    double curvature_quad_start() const;

    /// Throws std::domain_error when r lies outside [r_min, r_max].
    void require_in_domain(double r) const;

private:
    WarpedMetric() = default;

    MetricKind kind_ = MetricKind::Euclidean;
    double param_ = 0.0;
    double r_min_ = 0.0;
    double r_max_ = std::numeric_limits<double>::infinity();
    bool smooth_origin_ = true;
    std::string name_ = "euclidean";
    std::function<double(double)> tau_fn_;  // custom only
    std::function<double(double)> dtau_fn_, d2tau_fn_;  // optional, custom only
};

/// Gaussian curvature K(r) = -tau''(r)/tau(r).
double curvature(const WarpedMetric& m, double r);

/// l(r) = 2 pi tau(r).
double boundary_length(const WarpedMetric& m, double r);

/// a(s) = 2 pi int_{r_min}^{s} tau.
double disk_area(const WarpedMetric& m, double s);

/// int_{D(s)} K = 2 pi int_{r_min}^{s} K tau.
double curvature_integral(const WarpedMetric& m, double s);

/// min over s in [r_min, r1] of the curvature integral (grid + refinement).
double kmin_profile(const WarpedMetric& m, double r1);

/// a(r2) - a(r1), requires r1 <= r2.
double annulus_area(const WarpedMetric& m, double r1, double r2);

/// Piecewise-constant Euler characteristic profile chi(r) <= 1.
/// value(i) applies on [jump(i-1), jump(i)); the last value extends to +inf.
class ChiProfile {
public:
    ChiProfile() : values_{1} {}
    static ChiProfile step(std::vector<double> jumps, std::vector<int> values);

    int operator()(double r) const;
    const std::vector<double>& breakpoints() const { return jumps_; }
    int max_value() const;
    bool constant_one() const { return jumps_.empty() && values_.size() == 1 && values_[0] == 1; }

private:
    std::vector<double> jumps_;
    std::vector<int> values_;
};

struct DiskGeometry {
    WarpedMetric metric;
    ChiProfile chi;
};

/// 2 pi chi(r) - K(r) - l'(r); nonnegative by the first-variation-of-length
/// comparison, zero on smooth rotational metrics with chi == 1.
double shiohama_tanaka_slack(const DiskGeometry& g, double r);

}  // namespace stab
