#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "stab/ode.hpp"
#include "stab/numerics.hpp"
#include "stab/spectral.hpp"

using namespace stab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("shooting: flat disks never oscillate, hyperbolic past 1/4 does") {
    const WarpedMetric flat = WarpedMetric::euclidean();
    CHECK_FALSE(shoot_positive_solution(flat, StabilityParams::zero_potential(0.9), 50.0)
                    .has_value());

    const WarpedMetric hyp = WarpedMetric::hyperbolic(1.0);
    const auto osc = shoot_positive_solution(hyp, StabilityParams::zero_potential(0.3), 40.0);
    REQUIRE(osc.has_value());
    CHECK(*osc > 0.0);
    CHECK(*osc < 40.0);
    CHECK_FALSE(
        shoot_positive_solution(hyp, StabilityParams::zero_potential(0.2), 40.0).has_value());
}

TEST_CASE("Sturm comparison: first zero moves inward as a grows") {
    Rng rng(31);
    const std::vector<WarpedMetric> pool = {WarpedMetric::hyperbolic(1.0),
                                            WarpedMetric::hyperbolic(0.5)};
    int checked = 0;
    for (int i = 0; i < 40 && checked < 20; ++i) {
        const WarpedMetric& m = pool[rng.index(pool.size())];
        const double a1 = rng.uniform(0.26, 0.6);
        const double a2 = a1 + rng.uniform(0.05, 0.4);
        const auto z1 = shoot_positive_solution(m, StabilityParams::zero_potential(a1), 120.0);
        const auto z2 = shoot_positive_solution(m, StabilityParams::zero_potential(a2), 120.0);
        if (!z1 || !z2) continue;
        CHECK(*z2 <= *z1 + 1e-9);
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("critical constant estimate on the hyperbolic plane") {
    const SpectralResult res = estimate_a0(WarpedMetric::hyperbolic(1.0), 40.0, 1e-3);
    CHECK(res.monotone_bisection);
    CHECK(res.a0_low <= res.a0_high);
    CHECK(res.a0_high - res.a0_low <= 1e-3);
    // the truncated threshold upper-bounds the critical constant...
    CHECK(res.a0_high >= 0.25);
    // ...and shrinks as the radius doubles
    CHECK(res.convergence_gap > 0.0);
    CHECK(res.threshold2_high <= res.a0_high);
    // the extrapolated bracket holds the critical value 1/4
    CHECK(res.refined_low <= 0.25);
    CHECK(res.refined_high >= 0.25);
    CHECK(res.refined_high - res.refined_low <= 1e-3);
    REQUIRE(res.first_zero.has_value());
    CHECK(*res.first_zero <= 40.0);
}

TEST_CASE("bisection consistency around the truncated threshold") {
    const double tol = 1e-3;
    const WarpedMetric hyp = WarpedMetric::hyperbolic(1.0);
    const SpectralResult res = estimate_a0(hyp, 40.0, tol);
    for (int i = 0; i < 3; ++i) {
        const double a_ok = res.a0_low - 5.0 * tol * i / 2.0;
        CHECK_FALSE(shoot_positive_solution(hyp, StabilityParams::zero_potential(a_ok), 40.0)
                        .has_value());
        const double a_bad = res.a0_high + 5.0 * tol * i / 2.0;
        CHECK(shoot_positive_solution(hyp, StabilityParams::zero_potential(a_bad), 40.0)
                  .has_value());
    }
}

TEST_CASE("critical constant: flat plane is unbounded, schoen strictly positive") {
    const SpectralResult flat = estimate_a0(WarpedMetric::euclidean(), 30.0, 1e-3);
    CHECK(flat.unbounded);

    const SpectralResult sch = estimate_a0(WarpedMetric::schoen(0.5), 200.0, 1e-3);
    CHECK_FALSE(sch.unbounded);
    CHECK(sch.a0_low > 0.0);
    CHECK(sch.a0_high < 0.5);
}

TEST_CASE("mixed-sign curvature falls back to a flagged grid scan") {
    const SpectralResult res = estimate_a0(WarpedMetric::sphere(1.0), 2.5, 1e-3);
    CHECK_FALSE(res.monotone_bisection);
}

TEST_CASE("lambda1 on the flat unit disk matches the Bessel oracle") {
    const double j0 = oracles::bessel_j0_first_zero();
    const double expected = j0 * j0;
    const double got =
        lambda1(WarpedMetric::euclidean(), StabilityParams::zero_potential(1e-9), 1.0);
    CHECK(std::abs(got - expected) <= 1e-3);
    CHECK(expected == doctest::Approx(5.783185962946785).epsilon(1e-12));
}

TEST_CASE("lambda1 scales like 1/s^2 on flat disks") {
    const StabilityParams p = StabilityParams::zero_potential(1e-9);
    const double l1 = lambda1(WarpedMetric::euclidean(), p, 1.0);
    const double l2 = lambda1(WarpedMetric::euclidean(), p, 2.0);
    CHECK(l2 == doctest::Approx(l1 / 4.0).epsilon(1e-6));
}

TEST_CASE("lambda1 eigen-bisection vs finite-difference oracle") {
    Rng rng(17);
    struct Scenario {
        WarpedMetric m;
        double s_cap;
    };
    const std::vector<Scenario> pool = {
        {WarpedMetric::euclidean(), 6.0},
        {WarpedMetric::hyperbolic(1.0), 8.0},
        {WarpedMetric::hyperbolic(0.5), 8.0},
        {WarpedMetric::cone(0.6), 6.0},
        {WarpedMetric::sphere(1.0), 2.4},
    };
    for (int i = 0; i < 20; ++i) {
        const Scenario& sc = pool[rng.index(pool.size())];
        const double s = rng.uniform(0.8, sc.s_cap);
        const double a = rng.uniform(0.0, 0.4) + 1e-9;
        StabilityParams p = StabilityParams::zero_potential(a);
        if (rng.uniform() < 0.4)
            p = StabilityParams::constant_potential(a, rng.uniform(0.1, 1.0));
        const double shoot = lambda1(sc.m, p, s);
        const double fd = oracles::fd_lambda1(sc.m, p, s);
        CHECK(std::abs(shoot - fd) <= 1e-3 * std::max(1.0, std::abs(shoot)));
    }
}

TEST_CASE("lambda1 domain monotonicity") {
    const StabilityParams p = StabilityParams::zero_potential(0.25);
    for (const WarpedMetric& m :
         {WarpedMetric::hyperbolic(1.0), WarpedMetric::euclidean()}) {
        double prev = 1e300;
        for (double s : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            const double v = lambda1(m, p, s);
            CHECK(v <= prev + 1e-10);
            prev = v;
        }
    }
}

TEST_CASE("lambda1 curve fills the spectral result in index order") {
    const StabilityParams p = StabilityParams::zero_potential(0.25);
    const std::vector<double> grid{1.0, 2.0, 4.0, 8.0};
    const SpectralResult seq = lambda1_curve(WarpedMetric::hyperbolic(1.0), p, grid, 1);
    const SpectralResult par = lambda1_curve(WarpedMetric::hyperbolic(1.0), p, grid, 3);
    REQUIRE(seq.lambda1_curve.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(seq.lambda1_curve[i].first == grid[i]);
        CHECK(seq.lambda1_curve[i].second == par.lambda1_curve[i].second);
        if (i) CHECK(seq.lambda1_curve[i].second <= seq.lambda1_curve[i - 1].second + 1e-10);
    }
}

TEST_CASE("a-scan reports feasibility flips") {
    const std::vector<double> avals{0.1, 0.2, 0.3, 0.5};
    const auto scan = a_scan(WarpedMetric::hyperbolic(1.0), avals, 40.0);
    REQUIRE(scan.size() == 4);
    CHECK_FALSE(scan[0].second.has_value());
    CHECK_FALSE(scan[1].second.has_value());
    CHECK(scan[2].second.has_value());
    CHECK(scan[3].second.has_value());
    CHECK(*scan[3].second < *scan[2].second);  // deeper a oscillates sooner
}

TEST_CASE("distance bound on flat disks with constant potential") {
    for (double c : {0.25, 1.0, 4.0}) {
        const StabilityParams p = StabilityParams::constant_potential(0.25, c);
        const DistanceBoundResult res =
            distance_bound(WarpedMetric::euclidean(), p, 1.0, 0.25, 100.0);
        REQUIRE(res.found);
        CHECK(res.method == "mpr");
        CHECK(std::abs(res.s_star * std::sqrt(c) - 4.0) <= 0.04);
        CHECK(res.slack_at_failure < 0.0);
        CHECK(res.slack_at_start >= 0.0);
    }
}

TEST_CASE("distance bound: no bound when the potential vanishes") {
    const StabilityParams p = StabilityParams::zero_potential(0.25);
    const DistanceBoundResult res =
        distance_bound(WarpedMetric::euclidean(), p, 1.0, 1.0, 50.0);
    CHECK_FALSE(res.found);
    CHECK(res.s_star == doctest::Approx(50.0));
}

TEST_CASE("potential lower bounds are certified on a sample grid") {
    CHECK_THROWS_AS(StabilityParams::custom_potential(
                        0.25, [](double r) { return 1.0 - r; }, "dips_negative"),
                    std::invalid_argument);
    const StabilityParams decay = StabilityParams::custom_potential(
        0.25, [](double r) { return 1.0 / (1.0 + r); }, "decay");
    CHECK_THROWS_AS(decay.with_c_lower(0.5), std::invalid_argument);
    CHECK(decay.with_c_lower(1.0 / 65.0).c_lower().has_value());
}

TEST_CASE("distance bound routes through the log-power estimate for k > 2") {
    const StabilityParams p = StabilityParams::constant_potential(0.25, 1.0);
    const DistanceBoundResult res =
        distance_bound(WarpedMetric::schoen(1.2), p, 1.1, 5.0, 4000.0);
    CHECK(res.method == "estimatepos");
    CHECK(res.b_used == doctest::Approx(1.1));
    CHECK(res.k_hat == doctest::Approx(3.2));
    REQUIRE(res.found);
    CHECK(res.slack_at_failure < 0.0);
}

TEST_CASE("potential growth check") {
    const std::vector<double> grid{2.0, 4.0, 8.0, 16.0};

    // V == 0: all ratios vanish
    const PotentialGrowthReport zero = potential_growth_check(
        WarpedMetric::euclidean(), StabilityParams::zero_potential(0.25), 1.0, grid);
    CHECK(zero.sup_ratio == 0.0);
    CHECK(zero.hypothesis_ok);

    // decaying potential: integral bounded, hypothesis holds at these radii
    const StabilityParams decay = StabilityParams::custom_potential(
        0.25, [](double r) { return 1.0 / std::pow(1.0 + r, 3.0); }, "inverse_cubic");
    const PotentialGrowthReport dec =
        potential_growth_check(WarpedMetric::euclidean(), decay, 1.0, grid);
    CHECK(dec.hypothesis_ok);
    CHECK(dec.rows.back().potential_integral <= kPi + 1e-6);
    CHECK(dec.k_le_2);

    // constant potential on big flat disks: lambda1 goes negative
    const PotentialGrowthReport bad = potential_growth_check(
        WarpedMetric::euclidean(), StabilityParams::constant_potential(0.25, 1.0), 1.0,
        std::vector<double>{1.0, 8.0, 20.0});
    CHECK_FALSE(bad.hypothesis_ok);
    CHECK(bad.rows.back().lambda1 < 0.0);
}

TEST_CASE("step underflow near a degenerate waist raises with the last radius") {
    // tau = 1 - r collapses at r = 1; the damping coefficient tau'/tau blows
    // up and the adaptive step dies approaching it
    const WarpedMetric pinched =
        WarpedMetric::custom([](double r) { return 1.0 - r; }, 0.0, 1.0, "pinched");
    const StabilityParams p = StabilityParams::zero_potential(0.25);
    bool threw = false;
    try {
        shoot_positive_solution(pinched, p, 1.0 - 1e-13);
    } catch (const OdeError& e) {
        threw = true;
        CHECK(e.last_reliable_t > 0.9);
        CHECK(e.last_reliable_t < 1.0);
    }
    CHECK(threw);
}

TEST_CASE("curvature integrability report") {
    const CurvatureIntegrabilityReport flat =
        curvature_integrability_report(WarpedMetric::euclidean(), 100.0);
    CHECK(flat.K_plus == doctest::Approx(0.0));
    CHECK(flat.K_minus == doctest::Approx(0.0));
    CHECK(flat.integral_in_range);
    REQUIRE(flat.growth.has_value());
    CHECK(flat.quadratic_growth);

    const double R = kPi - 1e-3;
    const CurvatureIntegrabilityReport sph =
        curvature_integrability_report(WarpedMetric::sphere(1.0), R);
    CHECK(sph.K_plus == doctest::Approx(2.0 * kPi * (1.0 - std::cos(R))).epsilon(1e-8));
    CHECK(sph.K_minus == doctest::Approx(0.0));
    CHECK_FALSE(sph.growth.has_value());

    const CurvatureIntegrabilityReport sch =
        curvature_integrability_report(WarpedMetric::schoen(0.5), 1000.0);
    CHECK(sch.K_plus == doctest::Approx(0.0));
    CHECK(sch.K_minus < 0.0);
    CHECK(std::isfinite(sch.K_minus));
    REQUIRE(sch.growth.has_value());
    CHECK(sch.growth->k_hat == doctest::Approx(2.5).epsilon(0.01));
    CHECK_FALSE(sch.quadratic_growth);  // grows faster than quadratic
}
