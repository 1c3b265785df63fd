#include "stab/indexform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stab/asymptotics.hpp"
#include "stab/quadrature.hpp"
#include "stab/spectral.hpp"

namespace stab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void echo_common(InequalityReport& rep, const WarpedMetric& m,
                 const StabilityParams& p) {
    rep.params.emplace_back("metric", m.name());
    rep.params.emplace_back("potential", p.potential_name());
    rep.params.emplace_back("a", fmt(p.a()));
}

/// K l = -2 pi tau'' identically; quadratures over curvature terms start at
/// the apex-shifted lower limit.
double curvature_term(const WarpedMetric& m, const CutoffSpec& spec, double lo,
                      double hi, double a) {
    const double qlo = std::max(lo, m.curvature_quad_start());
    if (hi <= qlo) return 0.0;
    auto integrand = [&](double r) {
        const CutoffValue v = eval_cutoff(spec, r);
        return -2.0 * kPi * m.d2tau(r) * v.f * v.f;
    };
    return a * integrate_split(integrand, qlo, hi, spec.breakpoints());
}

double potential_term(const WarpedMetric& m, const StabilityParams& p,
                      const CutoffSpec& spec, double lo, double hi) {
    auto integrand = [&](double r) {
        const CutoffValue v = eval_cutoff(spec, r);
        return p.V(r) * v.f * v.f * 2.0 * kPi * m.tau(r);
    };
    return integrate_split(integrand, lo, hi, spec.breakpoints());
}

double gradient_term(const WarpedMetric& m, const CutoffSpec& spec, double lo,
                     double hi) {
    auto integrand = [&](double r) {
        const CutoffValue v = eval_cutoff(spec, r);
        return v.df * v.df * 2.0 * kPi * m.tau(r);
    };
    return integrate_split(integrand, lo, hi, spec.breakpoints());
}

}  // namespace

StabilityParams StabilityParams::zero_potential(double a) {
    if (!(a > 0)) throw std::invalid_argument("StabilityParams: a must be positive");
    StabilityParams p;
    p.a_ = a;
    return p;
}

StabilityParams StabilityParams::constant_potential(double a, double c) {
    if (!(a > 0)) throw std::invalid_argument("StabilityParams: a must be positive");
    if (!(c > 0)) throw std::invalid_argument("StabilityParams: c must be positive");
    StabilityParams p;
    p.a_ = a;
    p.v_ = [c](double) { return c; };
    p.c_lower_ = c;
    p.potential_name_ = "constant:" + std::to_string(c);
    return p;
}

namespace {

// Dense sample grid used to certify pointwise lower bounds on potentials.
void check_potential_bound(const std::function<double(double)>& v, double bound,
                           const char* what) {
    for (int i = 0; i <= 256; ++i) {
        const double r = 64.0 * i / 256.0;
        if (!(v(r) >= bound - 1e-12))
            throw std::invalid_argument(std::string(what) + " violated at r = " +
                                        std::to_string(r));
    }
}

}  // namespace

StabilityParams StabilityParams::custom_potential(double a,
                                                  std::function<double(double)> v,
                                                  const std::string& label) {
    if (!(a > 0)) throw std::invalid_argument("StabilityParams: a must be positive");
    if (!v) throw std::invalid_argument("StabilityParams: empty potential");
    check_potential_bound(v, 0.0, "StabilityParams: V >= 0");
    StabilityParams p;
    p.a_ = a;
    p.v_ = std::move(v);
    p.potential_name_ = label;
    return p;
}

StabilityParams StabilityParams::with_c_lower(double c) const {
    if (!(c > 0)) throw std::invalid_argument("with_c_lower: c must be positive");
    if (v_) check_potential_bound(v_, c, "with_c_lower: V >= c");
    else throw std::invalid_argument("with_c_lower: V is identically zero");
    StabilityParams p = *this;
    p.c_lower_ = c;
    return p;
}

double InequalityReport::normalized_slack() const {
    return slack / std::max(1.0, std::abs(rhs));
}

bool InequalityReport::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

double index_form(const WarpedMetric& m, const StabilityParams& p,
                  const CutoffSpec& spec) {
    const double s = spec.s();
    m.require_in_domain(s);
    const double lo = m.r_min();
    return gradient_term(m, spec, lo, s) - potential_term(m, p, spec, lo, s) +
           curvature_term(m, spec, lo, s, p.a());
}

InequalityReport cm_inequality_report(const WarpedMetric& m, const StabilityParams& p,
                                      const CutoffSpec& spec, const ChiProfile& chi) {
    if (spec.family() == CutoffFamily::Huber)
        throw std::invalid_argument(
            "cm_inequality_report: requires a cutoff with an inner plateau");
    const double s = spec.s();
    m.require_in_domain(s);
    const double a = p.a();
    const double eps = spec.epsilon();

    InequalityReport rep;
    rep.name = "cm_inequality";
    rep.lhs = index_form(m, p, spec);

    const double G = G_term(spec, chi, s);
    const double fme = f_minus_at_epsilon(spec);
    const double leps = boundary_length(m, std::max(eps, m.r_min()));
    const double potential = potential_term(m, p, spec, m.r_min(), s);
    auto F_l = [&](double r) {
        return F_profile(spec, a, r) * 2.0 * kPi * m.tau(r);
    };
    const double f_int =
        integrate_split(F_l, std::max(eps, m.r_min()), s, spec.breakpoints());

    rep.rhs = 2.0 * a * (kPi * G - fme * leps) - potential + f_int;
    rep.slack = rep.rhs - rep.lhs;
    rep.terms = {{"index_form", rep.lhs},
                 {"G", G},
                 {"f_minus_at_epsilon", fme},
                 {"l_at_epsilon", leps},
                 {"potential_integral", potential},
                 {"F_integral", f_int}};
    echo_common(rep, m, p);
    rep.params.emplace_back("cutoff", spec.name());
    rep.params.emplace_back("s", fmt(s));
    if (m.kind() == MetricKind::Euclidean || (m.kind() == MetricKind::Cone))
        rep.flags.push_back("curvature_identically_zero");
    return rep;
}

InequalityReport estimate_report(const WarpedMetric& m, const StabilityParams& p,
                                 const AlphaParams& params, double s,
                                 const ChiProfile& chi) {
    if (!(params.alpha > 0))
        throw std::invalid_argument("estimate_report: alpha > 0 violated");
    if (!(s > params.alpha + params.delta))
        throw std::invalid_argument("estimate_report: s > alpha + delta violated");
    m.require_in_domain(s);

    const double a = params.a, b = params.b;
    const CutoffSpec spec = CutoffSpec::log_power(b, s);
    const double eps = spec.epsilon();

    InequalityReport rep;
    rep.name = "estimate";
    rep.lhs = index_form(m, p, spec);

    const double G = G_term(spec, chi, s);
    const double kmin = kmin_profile(m, std::min(eps, s));
    const double rho = rho_plus(m, a, b, params.delta, s);
    const double potential = potential_term(m, p, spec, m.r_min(), s);

    rep.rhs = 2.0 * a * (G * kPi + b * (2.0 * kPi - kmin) / s) + rho - potential;
    rep.slack = rep.rhs - rep.lhs;
    rep.terms = {{"index_form", rep.lhs},
                 {"G", G},
                 {"kmin_at_epsilon", kmin},
                 {"rho_plus", rho},
                 {"potential_integral", potential}};
    echo_common(rep, m, p);
    rep.params.emplace_back("b", fmt(b));
    rep.params.emplace_back("alpha", fmt(params.alpha));
    rep.params.emplace_back("delta", fmt(params.delta));
    rep.params.emplace_back("s", fmt(s));
    return rep;
}

InequalityReport mpr_inequality(const WarpedMetric& m, const StabilityParams& p,
                                double b, double s, MprCertify certify) {
    if (!(b >= 1.0)) throw std::invalid_argument("mpr_inequality: b >= 1 required");
    m.require_in_domain(s);
    const double a = p.a();

    InequalityReport rep;
    rep.name = "mpr";
    auto lhs_fn = [&](double r) {
        return std::pow(1.0 - r / s, 2.0 * b) * p.V(r) * 2.0 * kPi * m.tau(r);
    };
    rep.lhs = integrate(lhs_fn, m.r_min(), s);
    auto rhs_fn = [&](double r) {
        return std::pow(1.0 - r / s, 2.0 * b - 2.0) * 2.0 * kPi * m.tau(r);
    };
    const double weighted_area = integrate(rhs_fn, m.r_min(), s);
    const double coeff = b * (b * (1.0 - 4.0 * a) + 2.0 * a) / (s * s);
    rep.rhs = 2.0 * a * kPi + coeff * weighted_area;
    rep.slack = rep.rhs - rep.lhs;
    rep.terms = {{"weighted_potential", rep.lhs},
                 {"weighted_area", weighted_area},
                 {"coefficient", coeff}};

    if (certify == MprCertify::Shooting) {
        const double l1 = lambda1(m, p, s);
        rep.terms.emplace_back("lambda1", l1);
        rep.flags.push_back(l1 >= 0 ? "lambda1_certified" : "hypothesis_failed");
    } else {
        rep.flags.push_back("nonpositivity_assumed");
    }
    echo_common(rep, m, p);
    rep.params.emplace_back("b", fmt(b));
    rep.params.emplace_back("s", fmt(s));
    return rep;
}

InequalityReport huber_report(const WarpedMetric& m, const StabilityParams& p,
                              double s0, double s1, double s2, double s,
                              const ChiProfile& chi) {
    const CutoffSpec spec = CutoffSpec::huber(s0, s1, s2, s);
    m.require_in_domain(s);
    const double a = p.a();

    // c_a = -a K(s1) + int_{D(s1)\D(s1-1)} (|grad f0|^2 + a K f0^2), f0 = r-s1+1.
    const double Ks1 = curvature_integral(m, s1);
    auto annulus_fn = [&](double r) {
        const double f0 = r - s1 + 1.0;
        return 2.0 * kPi * (m.tau(r) - a * m.d2tau(r) * f0 * f0);
    };
    const double c_a = -a * Ks1 + integrate(annulus_fn, s1 - 1.0, s1);

    const double G = G_term(spec, chi, s);
    const double ls2 = boundary_length(m, s2);
    const double tail_area = annulus_area(m, s2, s);

    InequalityReport rep;
    rep.name = "huber";
    rep.lhs = 0.0;
    rep.rhs = c_a + 2.0 * kPi * a * G + 2.0 * a * ls2 / (s - s2) +
              (1.0 - 2.0 * a) / ((s - s2) * (s - s2)) * tail_area;
    rep.slack = rep.rhs - rep.lhs;
    rep.terms = {{"c_a", c_a},
                 {"G", G},
                 {"l_s2", ls2},
                 {"tail_area", tail_area}};
    echo_common(rep, m, p);
    rep.params.emplace_back("s0", fmt(s0));
    rep.params.emplace_back("s1", fmt(s1));
    rep.params.emplace_back("s2", fmt(s2));
    rep.params.emplace_back("s", fmt(s));
    return rep;
}

T3Result t3_functional(const WarpedMetric& m, double a, double M, double s0,
                       double s) {
    if (!(s > s0) || !(s0 > 0))
        throw std::invalid_argument("t3_functional: requires s > s0 > 0");
    const double area = disk_area(m, s);
    T3Result res;
    const double u = 1.0 - s0 / s;
    res.T = 2.0 * a * (1.0 - (M + 1.0) * u * u) + (1.0 - 2.0 * a) * area / (s * s);
    res.limit_estimate = -M + (1.0 - 2.0 * a) * area / (s * s);
    return res;
}

}  // namespace stab
