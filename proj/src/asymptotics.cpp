#include "stab/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stab/numerics.hpp"
#include "stab/quadrature.hpp"

namespace stab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double rho_plus(const WarpedMetric& m, double a, double b, double delta, double s) {
    const AlphaParams params = AlphaParams::make(a, b, delta);
    const double alpha = params.alpha;
    if (!(alpha > 0)) throw std::invalid_argument("rho_plus: alpha > 0 violated");
    if (!(s > alpha + delta))
        throw std::invalid_argument("rho_plus: s > alpha + delta violated");
    m.require_in_domain(s);

    const double s_pow = std::pow(s, 2.0 * (b + 1.0));
    const double outer = annulus_area(m, s * std::exp(-alpha), s);
    const double inner = annulus_area(m, s * std::exp(-s), s * std::exp(-(alpha + delta)));
    const double weight = (delta * std::exp(2.0 * delta) / alpha) *
                          std::pow(1.0 + delta / alpha, 2.0 * (b - 1.0));
    return 2.0 * a * b * std::pow(alpha, 2.0 * b - 1.0) * std::exp(2.0 * alpha) *
           (outer - weight * inner) / s_pow;
}

double rho_tilde(double alpha, double b, double k, double delta) {
    if (!(alpha > 0) || !(k > 0) || !(delta > 0))
        throw std::invalid_argument("rho_tilde: requires alpha, k, delta > 0");
    const double tail = std::exp((2.0 - k) * delta) * (delta / alpha) *
                        std::pow(1.0 + delta / alpha, 2.0 * (b - 1.0));
    return 1.0 - std::exp(-k * alpha) * (1.0 + tail);
}

Delta0Result delta0_minimizer(double alpha, double b, double k, double lo, double hi,
                              double tol) {
    if (!(alpha > 0)) throw std::invalid_argument("delta0_minimizer: alpha > 0 required");
    if (!(0 < lo && lo < hi))
        throw std::invalid_argument("delta0_minimizer: bad bracket");
    auto f = [&](double d) { return rho_tilde(alpha, b, k, d); };
    const GoldenResult g = golden_minimize(f, lo, hi, tol);
    Delta0Result res;
    res.delta0 = g.x;
    res.rho_min = g.fx;
    // The minimum over the compact bracket may sit on an endpoint (expected
    // for k <= 2, where the infimum over delta > 0 is not attained).
    for (double edge_pt : {lo, hi}) {
        const double fe = f(edge_pt);
        if (fe < res.rho_min) {
            res.rho_min = fe;
            res.delta0 = edge_pt;
        }
    }
    const double edge = std::max(1e-6, 10.0 * tol);
    res.boundary_flag = (res.delta0 - lo <= edge) || (hi - res.delta0 <= edge);
    return res;
}

std::optional<GrowthLaw> registry_growth(const WarpedMetric& m) {
    switch (m.kind()) {
        case MetricKind::Euclidean: return GrowthLaw{2.0, kPi};
        case MetricKind::Cone: return GrowthLaw{2.0, kPi * m.param()};
        case MetricKind::Schoen: {
            const double eps = m.param();
            return GrowthLaw{2.0 + eps, 2.0 * kPi / (eps * (1.0 + eps))};
        }
        default: return std::nullopt;  // exponential growth or bounded domain
    }
}

GrowthFit aag_fit(const WarpedMetric& m, double s_lo, double s_hi, int samples) {
    if (!(s_lo > 0) || !(s_hi > s_lo))
        throw std::invalid_argument("aag_fit: need 0 < s_lo < s_hi");
    if (!(s_hi / s_lo >= 10.0))
        throw std::invalid_argument("aag_fit: window must span at least one decade");
    if (!(s_hi <= m.r_max()))
        throw IntegrationError("aag_fit: fit undefined, window leaves the bounded domain",
                               0.0, 0.0);
    samples = std::max(samples, 32);

    std::vector<double> lx(samples), ly(samples);
    for (int i = 0; i < samples; ++i) {
        const double s = s_lo * std::pow(s_hi / s_lo, double(i) / (samples - 1));
        lx[i] = std::log(s);
        const double area = disk_area(m, s);
        if (!std::isfinite(area) || !(area > 0))
            throw IntegrationError("aag_fit: non-finite area sample", area, 0.0);
        ly[i] = std::log(area);
    }
    const LineFit full = fit_line(lx, ly);

    GrowthFit fit;
    fit.k_hat = full.slope;
    fit.C_hat = std::exp(full.intercept);
    fit.residual = full.rms_residual;
    fit.s_lo = s_lo;
    fit.s_hi = s_hi;

    // Drift check: refit on the upper half of the window; a power law keeps
    // the exponent stable.
    const int half = samples / 2;
    const LineFit upper = fit_line(std::span(lx).subspan(half), std::span(ly).subspan(half));
    const double drift = std::abs(upper.slope - full.slope);
    fit.power_law = fit.residual <= 0.01 && drift <= 0.05 * std::max(1.0, std::abs(full.slope));
    return fit;
}

std::vector<double> asymptotic_ratio(const WarpedMetric& m, double a, double b,
                                     double delta, std::span<const double> s_grid) {
    double k, C;
    if (auto law = registry_growth(m)) {
        k = law->k;
        C = law->C;
    } else {
        if (s_grid.empty()) throw std::invalid_argument("asymptotic_ratio: empty grid");
        const double hi = s_grid.back();
        const GrowthFit fit = aag_fit(m, hi / 100.0, hi);
        if (!fit.power_law)
            throw std::invalid_argument(
                "asymptotic_ratio: metric has no finite power-law growth");
        k = fit.k_hat;
        C = fit.C_hat;
    }
    const AlphaParams params = AlphaParams::make(a, b, delta);
    const double alpha = params.alpha;
    const double rt = rho_tilde(alpha, b, k, delta);
    if (std::abs(rt) <= 1e-12)
        throw std::invalid_argument("asymptotic_ratio: degenerate normalization, rho_tilde ~ 0");
    const double c_plus =
        2.0 * a * b * C * std::pow(alpha, 2.0 * b - 1.0) * std::exp(2.0 * alpha);

    std::vector<double> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        const double expected = c_plus * std::pow(s, k - 2.0 * (b + 1.0)) * rt;
        out.push_back(rho_plus(m, a, b, delta, s) / expected);
    }
    return out;
}

RhoAsymptotics make_rho_asymptotics(const WarpedMetric& m, double a, double b,
                                    double bracket_lo, double bracket_hi) {
    RhoAsymptotics out;
    out.a = a;
    out.b = b;
    const AlphaParams params = AlphaParams::make(a, b, 1.0);
    out.alpha = params.alpha;

    double k, C;
    if (auto law = registry_growth(m)) {
        k = law->k;
        C = law->C;
    } else {
        throw std::invalid_argument(
            "make_rho_asymptotics: metric has no registry growth law; fit one first");
    }
    out.k = k;
    out.C = C;
    out.C_plus = 2.0 * a * b * C * std::pow(out.alpha, 2.0 * b - 1.0) *
                 std::exp(2.0 * out.alpha);
    const Delta0Result d0 = delta0_minimizer(out.alpha, b, k, bracket_lo, bracket_hi);
    out.delta0 = d0.delta0;
    out.rho_min = d0.rho_min;
    out.bracket_lo = bracket_lo;
    out.bracket_hi = bracket_hi;
    out.boundary_flag = d0.boundary_flag;
    return out;
}

}  // namespace stab
