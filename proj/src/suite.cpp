#include "stab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "stab/numerics.hpp"

namespace stab {

namespace {

struct DrawSpec {
    WarpedMetric metric;
    StabilityParams params;
    CutoffSpec cm_cutoff;
    AlphaParams alpha;
    double s;
};

}  // namespace

SuiteResult run_inequality_suite(std::uint64_t seed, int draws, int jobs) {
    SuiteResult out;
    out.seed = seed;
    out.requested = draws;

    const std::vector<WarpedMetric> metrics = {
        WarpedMetric::euclidean(),      WarpedMetric::hyperbolic(1.0),
        WarpedMetric::hyperbolic(0.5), WarpedMetric::sphere(1.0),
        WarpedMetric::cone(0.7),        WarpedMetric::cone(0.4),
        WarpedMetric::schoen(0.5),      WarpedMetric::schoen(1.0)};

    // Draw admissible parameter tuples up front (sequential, so the sample
    // stream is independent of the job count).
    Rng rng(seed);
    std::vector<DrawSpec> specs;
    specs.reserve(draws);
    int guard = 0;
    while (static_cast<int>(specs.size()) < draws && guard < draws * 1000) {
        ++guard;
        const WarpedMetric& m = metrics[rng.index(metrics.size())];
        const int pot_kind = static_cast<int>(rng.index(3));
        const double a = rng.uniform(0.05, 0.5);
        const double b = rng.uniform(1.0, 3.0);
        const double delta = rng.uniform(0.1, 1.5);
        const double alpha = 1.0 + b * (1.0 - 4.0 * a) / (2.0 * a);
        if (!(alpha > 0.05)) continue;
        const double s_cap = std::min(0.9 * m.r_max(), 60.0);
        const double s_floor = alpha + delta + 0.5;
        if (!(s_floor < s_cap)) continue;
        const double s = rng.log_uniform(s_floor, s_cap);
        const bool linear_cm = rng.uniform() < 0.5;

        StabilityParams p = pot_kind == 0
                                ? StabilityParams::zero_potential(a)
                                : StabilityParams::constant_potential(
                                      a, pot_kind == 1 ? 0.5 : 2.0);
        DrawSpec spec{m, p,
                      linear_cm ? CutoffSpec::linear(s) : CutoffSpec::log_power(b, s),
                      AlphaParams::make(a, b, delta), s};
        specs.push_back(std::move(spec));
    }

    out.draws.resize(specs.size());
    parallel_for_indexed(specs.size(), jobs, [&](std::size_t i) {
        const DrawSpec& d = specs[i];
        SuiteDraw& row = out.draws[i];
        row.metric = d.metric.name();
        row.potential = d.params.potential_name();
        row.cutoff = d.cm_cutoff.name();
        row.a = d.alpha.a;
        row.b = d.alpha.b;
        row.delta = d.alpha.delta;
        row.s = d.s;
        const ChiProfile chi;
        const InequalityReport cm =
            cm_inequality_report(d.metric, d.params, d.cm_cutoff, chi);
        const InequalityReport est = estimate_report(d.metric, d.params, d.alpha, d.s);
        row.cm_slack = cm.normalized_slack();
        row.estimate_slack = est.normalized_slack();
        row.pass = row.cm_slack >= kSlackTolerance &&
                   row.estimate_slack >= kSlackTolerance;
    });

    out.worst_cm_slack = std::numeric_limits<double>::infinity();
    out.worst_estimate_slack = std::numeric_limits<double>::infinity();
    for (const SuiteDraw& d : out.draws) {
        out.worst_cm_slack = std::min(out.worst_cm_slack, d.cm_slack);
        out.worst_estimate_slack = std::min(out.worst_estimate_slack, d.estimate_slack);
        if (!d.pass) ++out.failures;
    }
    out.pass = out.failures == 0 && static_cast<int>(out.draws.size()) == draws;
    return out;
}

}  // namespace stab
