#include "stab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include "stab/numerics.hpp"
#include "stab/quadrature.hpp"

namespace stab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateTau = 1e-300;

std::string fmt_param(const std::string& base, double p) {
    std::ostringstream os;
    os << base << ":" << p;
    return os.str();
}

}  // namespace

WarpedMetric WarpedMetric::euclidean() {
    WarpedMetric m;
    m.kind_ = MetricKind::Euclidean;
    m.name_ = "euclidean";
    return m;
}

WarpedMetric WarpedMetric::hyperbolic(double kappa) {
    if (!(kappa > 0)) throw std::invalid_argument("hyperbolic: kappa must be positive");
    WarpedMetric m;
    m.kind_ = MetricKind::Hyperbolic;
    m.param_ = kappa;
    m.name_ = fmt_param("hyperbolic", kappa);
    return m;
}

WarpedMetric WarpedMetric::sphere(double kappa) {
    if (!(kappa > 0)) throw std::invalid_argument("sphere: kappa must be positive");
    WarpedMetric m;
    m.kind_ = MetricKind::Sphere;
    m.param_ = kappa;
    m.r_max_ = kPi / std::sqrt(kappa);
    m.name_ = fmt_param("sphere", kappa);
    return m;
}

WarpedMetric WarpedMetric::cone(double beta) {
    if (!(beta > 0) || beta > 1.0)
        throw std::invalid_argument("cone: beta must lie in (0, 1]");
    WarpedMetric m;
    m.kind_ = MetricKind::Cone;
    m.param_ = beta;
    m.smooth_origin_ = std::abs(beta - 1.0) <= 1e-10;
    m.name_ = fmt_param("cone", beta);
    return m;
}

WarpedMetric WarpedMetric::schoen(double eps) {
    if (!(eps > 0)) throw std::invalid_argument("schoen: eps must be positive");
    WarpedMetric m;
    m.kind_ = MetricKind::Schoen;
    m.param_ = eps;
    m.smooth_origin_ = false;  // tau'(0) = 0, apex is a cusp
    m.name_ = fmt_param("schoen", eps);
    return m;
}

WarpedMetric WarpedMetric::custom(std::function<double(double)> tau, double r_min,
                                  double r_max, const std::string& label) {
    if (!tau) throw std::invalid_argument("custom metric: empty profile");
    if (!(r_min >= 0) || !(r_max > r_min))
        throw std::invalid_argument("custom metric: need 0 <= r_min < r_max");
    WarpedMetric m;
    m.kind_ = MetricKind::Custom;
    m.r_min_ = r_min;
    m.r_max_ = r_max;
    m.tau_fn_ = std::move(tau);
    m.name_ = label;
    // smooth_origin requires tau(0) = 0 and tau'(0) = 1
    if (r_min == 0.0) {
        const double h = 1e-6;
        const double t0 = m.tau_fn_(h);
        m.smooth_origin_ = std::abs(t0 / h - 1.0) <= 1e-4 && t0 > 0;
    } else {
        m.smooth_origin_ = false;
    }
    return m;
}

WarpedMetric WarpedMetric::custom_with_derivatives(std::function<double(double)> tau,
                                                   std::function<double(double)> dtau,
                                                   std::function<double(double)> d2tau,
                                                   double r_min, double r_max,
                                                   const std::string& label) {
    WarpedMetric m = custom(std::move(tau), r_min, r_max, label);
    m.dtau_fn_ = std::move(dtau);
    m.d2tau_fn_ = std::move(d2tau);
    return m;
}

WarpedMetric WarpedMetric::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("from_csv: cannot open " + path);
    std::vector<double> rs, taus;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double r, t;
        if (!(ls >> r >> t)) continue;  // header or malformed row
        rs.push_back(r);
        taus.push_back(t);
    }
    if (rs.size() < 64)
        throw std::invalid_argument("from_csv: need at least 64 rows, got " +
                                    std::to_string(rs.size()));
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i > 0 && !(rs[i] > rs[i - 1]))
            throw std::invalid_argument("from_csv: radii must be strictly increasing");
        if (!(taus[i] > 0))
            throw std::invalid_argument("from_csv: tau must be positive");
    }
    auto spline = std::make_shared<CubicSpline>(rs, taus);
    const double lo = rs.front(), hi = rs.back();
    return custom_with_derivatives(
        [spline](double r) { return (*spline)(r); },
        [spline](double r) { return spline->derivative(r); },
        [spline](double r) { return spline->second_derivative(r); }, lo, hi,
        "custom_csv:" + path);
}

void WarpedMetric::require_in_domain(double r) const {
    if (!(r >= r_min_) || !(r <= r_max_))
        throw std::domain_error("radius " + std::to_string(r) +
                                " outside metric domain [" + std::to_string(r_min_) +
                                ", " + std::to_string(r_max_) + "]");
}

double WarpedMetric::tau(double r) const {
    switch (kind_) {
        case MetricKind::Euclidean: return r;
        case MetricKind::Hyperbolic: {
            const double w = std::sqrt(param_);
            return std::sinh(w * r) / w;
        }
        case MetricKind::Sphere: {
            const double w = std::sqrt(param_);
            return std::sin(w * r) / w;
        }
        case MetricKind::Cone: return param_ * r;
        case MetricKind::Schoen: {
            // Normalized so Area(D(s)) = 2 pi s^{2+eps} / (eps (1+eps)) exactly.
            const double c = (2.0 + param_) / (param_ * (1.0 + param_));
            return c * std::pow(r, 1.0 + param_);
        }
        case MetricKind::Custom: return tau_fn_(r);
    }
    return 0.0;
}

double WarpedMetric::dtau(double r) const {
    switch (kind_) {
        case MetricKind::Euclidean: return 1.0;
        case MetricKind::Hyperbolic: return std::cosh(std::sqrt(param_) * r);
        case MetricKind::Sphere: return std::cos(std::sqrt(param_) * r);
        case MetricKind::Cone: return param_;
        case MetricKind::Schoen: {
            const double c = (2.0 + param_) / (param_ * (1.0 + param_));
            return c * (1.0 + param_) * std::pow(r, param_);
        }
        case MetricKind::Custom: {
            if (dtau_fn_) return dtau_fn_(r);
            const double h = 1e-5 * std::max(1.0, std::abs(r));
            return (tau_fn_(r + h) - tau_fn_(r - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

double WarpedMetric::d2tau(double r) const {
    switch (kind_) {
        case MetricKind::Euclidean: return 0.0;
        case MetricKind::Hyperbolic: {
            const double w = std::sqrt(param_);
            return w * std::sinh(w * r);
        }
        case MetricKind::Sphere: {
            const double w = std::sqrt(param_);
            return -w * std::sin(w * r);
        }
        case MetricKind::Cone: return 0.0;
        case MetricKind::Schoen:
            // c (1+eps) eps = 2+eps; K = -tau''/tau = -eps(1+eps)/r^2
            return (2.0 + param_) * std::pow(r, param_ - 1.0);
        case MetricKind::Custom: {
            if (d2tau_fn_) return d2tau_fn_(r);
            const double h = 1e-5 * std::max(1.0, std::abs(r));
            return (tau_fn_(r + h) - 2.0 * tau_fn_(r) + tau_fn_(r - h)) / (h * h);
        }
    }
    return 0.0;
}

double WarpedMetric::curvature_quad_start() const {
    // tau'' ~ r^(eps-1) at the Schoen apex; keep curvature quadratures off it.
    if (kind_ == MetricKind::Schoen) return std::max(r_min_, 1e-8);
    return r_min_;
}

double curvature(const WarpedMetric& m, double r) {
    if (!(r > m.r_min()) || !(r < m.r_max()))
        throw std::domain_error("curvature: radius outside the open domain");
    const double t = m.tau(r);
    if (!(std::abs(t) > kDegenerateTau))
        throw std::runtime_error("curvature: degenerate metric, tau below 1e-300");
    return -m.d2tau(r) / t;
}

double boundary_length(const WarpedMetric& m, double r) {
    m.require_in_domain(r);
    return 2.0 * kPi * m.tau(r);
}

double disk_area(const WarpedMetric& m, double s) {
    m.require_in_domain(s);
    return 2.0 * kPi * integrate([&m](double t) { return m.tau(t); }, m.r_min(), s);
}

double curvature_integral(const WarpedMetric& m, double s) {
    m.require_in_domain(s);
    const double lo = m.curvature_quad_start();
    if (s <= lo) return 0.0;
    // K tau = -tau'' identically, which stays finite where tau -> 0.
    return 2.0 * kPi * integrate([&m](double t) { return -m.d2tau(t); }, lo, s);
}

double kmin_profile(const WarpedMetric& m, double r1) {
    m.require_in_domain(r1);
    const double lo = m.r_min();
    if (r1 <= lo) return 0.0;
    const int n = 512;
    // Cumulative integral on the grid, then golden refinement around the
    // best cell. The integral vanishes at s = r_min, so 0 is always a
    // candidate for the minimum.
    double best = 0.0;
    int best_i = 0;
    std::vector<double> grid(n + 1);
    for (int i = 0; i <= n; ++i) grid[i] = lo + (r1 - lo) * i / n;
    double acc = 0.0;
    const double qlo = m.curvature_quad_start();
    for (int i = 1; i <= n; ++i) {
        const double a = std::max(grid[i - 1], qlo);
        const double b = std::max(grid[i], qlo);
        if (b > a)
            acc += 2.0 * kPi *
                   integrate([&m](double t) { return -m.d2tau(t); }, a, b,
                             {1e-10, 1e-12, std::size_t{1} << 16});
        if (acc < best) {
            best = acc;
            best_i = i;
        }
    }
    const double wlo = grid[std::max(0, best_i - 1)];
    const double whi = grid[std::min(n, best_i + 1)];
    if (whi > wlo) {
        auto val = [&m](double s) { return curvature_integral(m, s); };
        const auto res = golden_minimize(val, wlo, whi, 1e-10 * std::max(1.0, r1));
        best = std::min(best, res.fx);
    }
    return best;
}

double annulus_area(const WarpedMetric& m, double r1, double r2) {
    if (!(r1 <= r2))
        throw std::invalid_argument("annulus_area: requires r1 <= r2");
    m.require_in_domain(r1);
    m.require_in_domain(r2);
    const double v = 2.0 * kPi * integrate([&m](double t) { return m.tau(t); }, r1, r2);
    return std::max(0.0, v);
}

ChiProfile ChiProfile::step(std::vector<double> jumps, std::vector<int> values) {
    if (values.size() != jumps.size() + 1)
        throw std::invalid_argument("ChiProfile: need one more value than jumps");
    for (std::size_t i = 1; i < jumps.size(); ++i)
        if (!(jumps[i] > jumps[i - 1]))
            throw std::invalid_argument("ChiProfile: jumps must be increasing");
    for (int v : values)
        if (v > 1)
            throw std::invalid_argument(
                "ChiProfile: chi must stay <= 1 (disk Euler characteristic)");
    ChiProfile p;
    p.jumps_ = std::move(jumps);
    p.values_ = std::move(values);
    return p;
}

int ChiProfile::operator()(double r) const {
    std::size_t i = 0;
    while (i < jumps_.size() && r >= jumps_[i]) ++i;
    return values_[i];
}

int ChiProfile::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double shiohama_tanaka_slack(const DiskGeometry& g, double r) {
    const WarpedMetric& m = g.metric;
    if (!(r > m.r_min()) || !(r < m.r_max()))
        throw std::domain_error("shiohama_tanaka_slack: radius outside open domain");
    const double lprime = 2.0 * kPi * m.dtau(r);
    return 2.0 * kPi * g.chi(r) - curvature_integral(m, r) - lprime;
}

}  // namespace stab
