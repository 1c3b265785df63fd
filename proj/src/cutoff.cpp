#include "stab/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stab/quadrature.hpp"

namespace stab {

namespace {

bool near(double x, double y) {
    return std::abs(x - y) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(y);
}

}  // namespace

CutoffSpec CutoffSpec::linear(double s) {
    if (!(s > 0)) throw std::invalid_argument("cutoff: s must be positive");
    CutoffSpec c;
    c.family_ = CutoffFamily::Linear;
    c.s_ = s;
    return c;
}

CutoffSpec CutoffSpec::log_power(double b, double s) {
    if (!(s > 0)) throw std::invalid_argument("cutoff: s must be positive");
    if (!(b >= 1.0)) throw std::invalid_argument("cutoff: b >= 1 required");
    CutoffSpec c;
    c.family_ = CutoffFamily::LogPower;
    c.s_ = s;
    c.b_ = b;
    c.epsilon_ = s * std::exp(-s);
    return c;
}

CutoffSpec CutoffSpec::power(double b, double s) {
    if (!(s > 0)) throw std::invalid_argument("cutoff: s must be positive");
    if (!(b >= 1.0)) throw std::invalid_argument("cutoff: b >= 1 required");
    CutoffSpec c;
    c.family_ = CutoffFamily::Power;
    c.s_ = s;
    c.b_ = b;
    return c;
}

CutoffSpec CutoffSpec::huber(double s0, double s1, double s2, double s) {
    if (!(s0 < s1 - 1.0) || !(s1 < s2) || !(s2 < s))
        throw std::invalid_argument(
            "cutoff: huber requires s0 < s1 - 1 < s1 < s2 < s");
    CutoffSpec c;
    c.family_ = CutoffFamily::Huber;
    c.s_ = s;
    c.s0_ = s0;
    c.s1_ = s1;
    c.s2_ = s2;
    c.epsilon_ = s1;  // plateau [s1, s2]
    return c;
}

std::string CutoffSpec::name() const {
    std::ostringstream os;
    switch (family_) {
        case CutoffFamily::Linear: os << "linear"; break;
        case CutoffFamily::LogPower: os << "log_power:" << b_; break;
        case CutoffFamily::Power: os << "power:" << b_; break;
        case CutoffFamily::Huber:
            os << "huber:" << s0_ << ":" << s1_ << ":" << s2_;
            break;
    }
    return os.str();
}

std::vector<double> CutoffSpec::breakpoints() const {
    switch (family_) {
        case CutoffFamily::Linear:
        case CutoffFamily::Power: return {s_};
        case CutoffFamily::LogPower: return {epsilon_, s_};
        case CutoffFamily::Huber: return {s1_ - 1.0, s1_, s2_, s_};
    }
    return {};
}

CutoffValue eval_cutoff(const CutoffSpec& spec, double r) {
    const double s = spec.s();
    if (!(r >= 0.0) || !(r <= s))
        throw std::domain_error("eval_cutoff: r outside [0, s]");
    CutoffValue v;
    switch (spec.family()) {
        case CutoffFamily::Linear: {
            v.at_breakpoint = near(r, s);
            if (v.at_breakpoint) {
                v = {0.0, 0.0, 0.0, true};
            } else {
                v.f = 1.0 - r / s;
                v.df = -1.0 / s;
                v.d2f = 0.0;
            }
            return v;
        }
        case CutoffFamily::Power: {
            v.at_breakpoint = near(r, s);
            if (v.at_breakpoint) {
                v = {0.0, 0.0, 0.0, true};
                return v;
            }
            const double b = spec.b();
            const double u = 1.0 - r / s;
            v.f = std::pow(u, b);
            v.df = -(b / s) * std::pow(u, b - 1.0);
            v.d2f = (b * (b - 1.0) / (s * s)) * std::pow(u, b - 2.0);
            return v;
        }
        case CutoffFamily::LogPower: {
            const double eps = spec.epsilon();
            const double b = spec.b();
            if (near(r, s)) return {0.0, 0.0, 0.0, true};
            if (r < eps && !near(r, eps)) return {1.0, 0.0, 0.0, false};
            const double g = std::log(s / r) / s;
            v.f = std::pow(g, b);
            v.df = -(b / (s * r)) * std::pow(g, b - 1.0);
            // f'' = (b/(s r^2)) g^(b-2) (g + (b-1)/s)
            v.d2f = (b / (s * r * r)) * std::pow(g, b - 2.0) * (g + (b - 1.0) / s);
            v.at_breakpoint = near(r, eps);
            return v;
        }
        case CutoffFamily::Huber: {
            const double s1 = spec.s1(), s2 = spec.s2();
            if (near(r, s)) return {0.0, 0.0, 0.0, true};
            if (near(r, s2)) return {1.0, -1.0 / (s - s2), 0.0, true};
            if (near(r, s1)) return {1.0, 0.0, 0.0, true};
            if (near(r, s1 - 1.0)) return {0.0, 1.0, 0.0, true};
            if (r < s1 - 1.0) return {0.0, 0.0, 0.0, false};
            if (r < s1) return {r - s1 + 1.0, 1.0, 0.0, false};
            if (r < s2) return {1.0, 0.0, 0.0, false};
            return {(s - r) / (s - s2), -1.0 / (s - s2), 0.0, false};
        }
    }
    return v;
}

double f_minus_at_epsilon(const CutoffSpec& spec) {
    switch (spec.family()) {
        case CutoffFamily::Linear: return -1.0 / spec.s();
        case CutoffFamily::Power: return -spec.b() / spec.s();
        case CutoffFamily::LogPower:
            // g = 1 at the plateau junction r = s e^{-s}
            return -spec.b() / (spec.s() * spec.s() * std::exp(-spec.s()));
        case CutoffFamily::Huber: return 0.0;  // flat on [s1, s2]
    }
    return 0.0;
}

double F_profile(const CutoffSpec& spec, double a, double r) {
    const double s = spec.s();
    switch (spec.family()) {
        case CutoffFamily::Linear: return (1.0 - 2.0 * a) / (s * s);
        case CutoffFamily::Power: {
            const double b = spec.b();
            const double u = 1.0 - r / s;
            return (b * (b * (1.0 - 4.0 * a) + 2.0 * a) / (s * s)) *
                   std::pow(u, 2.0 * b - 2.0);
        }
        case CutoffFamily::LogPower: {
            const double b = spec.b();
            const double alpha = 1.0 + b * (1.0 - 4.0 * a) / (2.0 * a);
            const double g = std::log(s / r) / s;
            const double phi = alpha - s * g;
            return 2.0 * a * b * std::pow(g, 2.0 * (b - 1.0)) / (s * s * r * r) * phi;
        }
        case CutoffFamily::Huber: {
            const double s1 = spec.s1(), s2 = spec.s2();
            if (r < s1 - 1.0 || r >= s) return 0.0;
            if (r < s1) return 1.0 - 2.0 * a;      // rising ramp, f' = 1
            if (r < s2) return 0.0;                 // plateau
            const double d = s - s2;
            return (1.0 - 2.0 * a) / (d * d);       // outer ramp
        }
    }
    return 0.0;
}

AlphaParams AlphaParams::make(double a, double b, double delta) {
    if (!(a > 0)) throw std::invalid_argument("AlphaParams: a must be positive");
    if (!(b >= 1.0)) throw std::invalid_argument("AlphaParams: b >= 1 required");
    if (!(delta > 0)) throw std::invalid_argument("AlphaParams: delta must be positive");
    AlphaParams p;
    p.a = a;
    p.b = b;
    p.delta = delta;
    p.alpha = 1.0 + b * (1.0 - 4.0 * a) / (2.0 * a);
    return p;
}

IntervalBoundsReport interval_bounds_check(const CutoffSpec& spec,
                                           const AlphaParams& params, double s,
                                           int samples_per_interval) {
    if (spec.family() != CutoffFamily::LogPower)
        throw std::invalid_argument("interval_bounds_check: log_power cutoff required");
    const double a = params.a, b = params.b;
    const double alpha = params.alpha, delta = params.delta;
    if (!(alpha > 0))
        throw std::invalid_argument("interval_bounds_check: alpha > 0 violated");
    if (!(s > alpha + delta))
        throw std::invalid_argument("interval_bounds_check: s > alpha + delta violated");

    const double e1 = s * std::exp(-s);
    const double e2 = s * std::exp(-(alpha + delta));
    const double e3 = s * std::exp(-alpha);
    const double s2b2 = std::pow(s, 2.0 * (b + 1.0));
    const double bound1 = -2.0 * delta * a * b * std::pow(alpha + delta, 2.0 * (b - 1.0)) *
                          std::exp(2.0 * (alpha + delta)) / s2b2;
    const double bound2 = 0.0;
    const double bound3 =
        2.0 * a * b * std::pow(alpha, 2.0 * b - 1.0) * std::exp(2.0 * alpha) / s2b2;

    auto worst = [&](double lo, double hi, double bound) {
        double w = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= samples_per_interval; ++i) {
            double r = lo + (hi - lo) * i / samples_per_interval;
            r = std::clamp(r, std::numeric_limits<double>::min(), s);
            w = std::min(w, bound - F_profile(spec, a, r));
        }
        return w;
    };

    IntervalBoundsReport rep;
    rep.worst_slack_i1 = worst(e1, e2, bound1);
    rep.worst_slack_i2 = worst(e2, e3, bound2);
    rep.worst_slack_i3 = worst(e3, s, bound3);
    rep.ok = rep.worst_slack_i1 >= -1e-10 && rep.worst_slack_i2 >= -1e-10 &&
             rep.worst_slack_i3 >= -1e-10;
    return rep;
}

double G_term(const CutoffSpec& spec, const ChiProfile& chi, double s) {
    const double lo = spec.family() == CutoffFamily::Huber ? spec.s2() : 0.0;
    std::vector<double> splits = spec.breakpoints();
    for (double t : chi.breakpoints()) splits.push_back(t);
    auto integrand = [&](double r) {
        const CutoffValue v = eval_cutoff(spec, r);
        return -2.0 * v.f * v.df * chi(r);
    };
    return integrate_split(integrand, lo, s, std::move(splits));
}

}  // namespace stab
