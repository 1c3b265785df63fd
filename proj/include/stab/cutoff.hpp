#pragma once

#include <string>
#include <vector>

#include "stab/metric.hpp"

namespace stab {

enum class CutoffFamily { Linear, LogPower, Power, Huber };

/// Radial test function vanishing at the outer radius s. Families:
///   linear     f = 1 - r/s on [0, s]
///   log_power  f = (ln(s/r)/s)^b on [s e^{-s}, s], 1 inside the plateau
///   power      f = (1 - r/s)^b on [0, s]
///   huber      ramp r-s1+1 on [s1-1,s1], 1 on [s1,s2], (s-r)/(s-s2) on [s2,s]
class CutoffSpec {
public:
    static CutoffSpec linear(double s);
    static CutoffSpec log_power(double b, double s);
    static CutoffSpec power(double b, double s);
    static CutoffSpec huber(double s0, double s1, double s2, double s);

    CutoffFamily family() const { return family_; }
    double s() const { return s_; }
    double b() const { return b_; }
    double epsilon() const { return epsilon_; }  // inner plateau radius
    double s0() const { return s0_; }
    double s1() const { return s1_; }
    double s2() const { return s2_; }
    std::string name() const;

    /// Junction radii, handed to every integrator as mandatory split points.
    std::vector<double> breakpoints() const;

private:
    CutoffFamily family_ = CutoffFamily::Linear;
    double s_ = 1.0;
    double b_ = 1.0;
    double epsilon_ = 0.0;
    double s0_ = 0.0, s1_ = 0.0, s2_ = 0.0;  // huber only
};

struct CutoffValue {
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;
    bool at_breakpoint = false;  // value is the one-sided limit from the right
};

/// f, f', f'' at r in [0, s]; at a junction the right-sided limit is returned
/// and flagged.
CutoffValue eval_cutoff(const CutoffSpec& spec, double r);

/// lim_{r -> eps+} f'(r); for plateau-free families this is f'(0+).
double f_minus_at_epsilon(const CutoffSpec& spec);

/// F(r) = (1-2a) f'(r)^2 - 2a f(r) f''(r), via the cancelled closed form for
/// the log_power family (raw f'' diverges at r -> s for b < 2 while F stays
/// bounded).
double F_profile(const CutoffSpec& spec, double a, double r);

/// alpha = 1 + b (1-4a)/(2a) and the delta used to carve the middle interval.
struct AlphaParams {
    double a = 0.0;
    double b = 1.0;
    double alpha = 0.0;
    double delta = 0.0;

    static AlphaParams make(double a, double b, double delta);
};

struct IntervalBoundsReport {
    // Worst (most negative) value of bound - F over sampled points, per interval.
    double worst_slack_i1 = 0.0;
    double worst_slack_i2 = 0.0;
    double worst_slack_i3 = 0.0;
    bool ok = false;
};

/// Samples F on the three subintervals of [s e^{-s}, s] carved by alpha and
/// delta and verifies the per-interval upper bounds pointwise.
IntervalBoundsReport interval_bounds_check(const CutoffSpec& spec,
                                           const AlphaParams& params, double s,
                                           int samples_per_interval = 256);

/// G(s) = -int_0^s (f^2)' chi. For the huber family only the outer ramp
/// enters (the inner ramp is accounted separately in the huber constant).
double G_term(const CutoffSpec& spec, const ChiProfile& chi, double s);

}  // namespace stab
