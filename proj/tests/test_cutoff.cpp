#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stab/cutoff.hpp"
#include "stab/numerics.hpp"

using namespace stab;

TEST_CASE("log_power continuity at the plateau junction and outer radius") {
    for (double b : {1.0, 1.7, 2.0, 3.0}) {
        for (double s : {2.0, 5.0, 9.0}) {
            const CutoffSpec c = CutoffSpec::log_power(b, s);
            const double eps = c.epsilon();
            const CutoffValue at_eps = eval_cutoff(c, eps);
            CHECK(at_eps.at_breakpoint);
            CHECK(std::abs(at_eps.f - 1.0) <= 1e-12);
            const CutoffValue at_s = eval_cutoff(c, s);
            CHECK(at_s.at_breakpoint);
            CHECK(at_s.f == 0.0);
            // interior continuity against neighbours of the junction
            const CutoffValue in = eval_cutoff(c, eps * (1.0 + 1e-9));
            CHECK(std::abs(in.f - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("log_power values and derivative closed form") {
    const CutoffSpec c = CutoffSpec::log_power(1.0, 5.0);
    const CutoffValue v = eval_cutoff(c, 1.0);
    CHECK(v.f == doctest::Approx(std::log(5.0) / 5.0).epsilon(1e-14));
    CHECK(v.df == doctest::Approx(-0.2).epsilon(1e-14));

    // derivative matches a central finite difference
    for (double b : {1.0, 2.0, 2.5}) {
        const CutoffSpec cb = CutoffSpec::log_power(b, 7.0);
        for (double r : {0.5, 1.0, 3.0, 6.0}) {
            const double h = 1e-6 * r;
            const double fd =
                (eval_cutoff(cb, r + h).f - eval_cutoff(cb, r - h).f) / (2.0 * h);
            CHECK(eval_cutoff(cb, r).df == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("linear and power families") {
    const CutoffSpec lin = CutoffSpec::linear(4.0);
    const CutoffValue v = eval_cutoff(lin, 1.0);
    CHECK(v.f == doctest::Approx(0.75));
    CHECK(v.df == doctest::Approx(-0.25));
    CHECK(v.d2f == 0.0);

    const CutoffSpec pw = CutoffSpec::power(2.0, 4.0);
    const CutoffValue w = eval_cutoff(pw, 1.0);
    CHECK(w.f == doctest::Approx(0.5625));
    CHECK(w.df == doctest::Approx(-0.375));
    CHECK_THROWS_AS(CutoffSpec::power(0.5, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(eval_cutoff(lin, 5.0), std::domain_error);
}

TEST_CASE("huber profile pieces") {
    const CutoffSpec h = CutoffSpec::huber(1.0, 3.0, 5.0, 10.0);
    CHECK(eval_cutoff(h, 1.5).f == 0.0);
    CHECK(eval_cutoff(h, 2.5).f == doctest::Approx(0.5));
    CHECK(eval_cutoff(h, 2.5).df == doctest::Approx(1.0));
    CHECK(eval_cutoff(h, 4.0).f == doctest::Approx(1.0));
    CHECK(eval_cutoff(h, 7.5).f == doctest::Approx(0.5));
    CHECK(eval_cutoff(h, 7.5).df == doctest::Approx(-0.2));
    CHECK_THROWS_AS(CutoffSpec::huber(1.0, 3.0, 11.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(CutoffSpec::huber(2.5, 3.0, 5.0, 10.0), std::invalid_argument);
}

TEST_CASE("f at the plateau edge") {
    CHECK(f_minus_at_epsilon(CutoffSpec::log_power(1.0, 3.0)) ==
          doctest::Approx(-1.0 / (9.0 * std::exp(-3.0))).epsilon(1e-13));
    // twice the b=1 value, g = 1 at the junction
    CHECK(f_minus_at_epsilon(CutoffSpec::log_power(2.0, 3.0)) ==
          doctest::Approx(-2.0 / (9.0 * std::exp(-3.0))).epsilon(1e-13));
    CHECK(f_minus_at_epsilon(CutoffSpec::linear(4.0)) == doctest::Approx(-0.25));
}

TEST_CASE("F closed form against the raw definition") {
    // linear: F is the constant (1-2a)/s^2
    const CutoffSpec lin = CutoffSpec::linear(3.0);
    CHECK(F_profile(lin, 0.2, 1.0) == doctest::Approx(0.6 / 9.0));

    // phi vanishes at r = s e^{-alpha}
    {
        const double a = 1.0 / 8.0, b = 1.0, s = 10.0;
        const double alpha = 1.0 + b * (1.0 - 4.0 * a) / (2.0 * a);
        CHECK(alpha == doctest::Approx(3.0));
        const CutoffSpec c = CutoffSpec::log_power(b, s);
        CHECK(std::abs(F_profile(c, a, s * std::exp(-alpha))) <= 1e-10);
    }

    // the same root property over random valid (a, b, s)
    {
        Rng root_rng(404);
        for (int i = 0; i < 200; ++i) {
            const double a = root_rng.uniform(0.05, 0.49);
            const double b = root_rng.uniform(1.0, 3.0);
            const double alpha = 1.0 + b * (1.0 - 4.0 * a) / (2.0 * a);
            if (!(alpha > 0.01)) continue;
            const double s = root_rng.uniform(alpha + 0.5, alpha + 20.0);
            const CutoffSpec c = CutoffSpec::log_power(b, s);
            const double root = s * std::exp(-alpha);
            if (root <= c.epsilon()) continue;
            // normalize by the local F scale: the prefactor of phi at the root
            const double prefactor = 2.0 * a * b *
                                     std::pow(alpha / s, 2.0 * (b - 1.0)) /
                                     (s * s * root * root);
            CHECK(std::abs(F_profile(c, a, root)) <= 1e-10 * std::max(1.0, prefactor));
        }
    }

    // a = 1/4, b = 1: F(r) = (1/(2 s^2 r^2)) (1 - ln(s/r))
    {
        const double s = 6.0;
        const CutoffSpec c = CutoffSpec::log_power(1.0, s);
        for (double r : {1.0, 2.0, 5.0}) {
            const double expected =
                (1.0 - std::log(s / r)) / (2.0 * s * s * r * r);
            CHECK(F_profile(c, 0.25, r) == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    // randomized: closed form vs (1-2a) f'^2 - 2a f f'' on interior points
    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(0.02, 0.5);
        const double b = rng.uniform(1.0, 3.0);
        const double s = rng.uniform(2.0, 20.0);
        const CutoffSpec c = CutoffSpec::log_power(b, s);
        const double eps = c.epsilon();
        const double r = eps + (s - eps) * rng.uniform(1e-3, 1.0 - 1e-3);
        const CutoffValue v = eval_cutoff(c, r);
        const double raw = (1.0 - 2.0 * a) * v.df * v.df - 2.0 * a * v.f * v.d2f;
        const double closed = F_profile(c, a, r);
        CHECK(std::abs(closed - raw) <=
              1e-8 * std::max({1.0, std::abs(closed), std::abs(raw)}));
    }
}

TEST_CASE("alpha params and interval bounds") {
    const AlphaParams p = AlphaParams::make(0.125, 1.0, 1.0);
    CHECK(p.alpha == doctest::Approx(3.0));
    CHECK(1.0 + p.b * (1.0 - 4.0 * p.a) / (2.0 * p.a) == p.alpha);

    const auto rep =
        interval_bounds_check(CutoffSpec::log_power(1.0, 10.0), p, 10.0);
    CHECK(rep.ok);
    CHECK(rep.worst_slack_i1 >= -1e-10);
    CHECK(rep.worst_slack_i2 >= -1e-10);
    CHECK(rep.worst_slack_i3 >= -1e-10);

    const AlphaParams q = AlphaParams::make(0.25, 2.0, 0.5);
    CHECK(q.alpha == doctest::Approx(1.0));
    CHECK(interval_bounds_check(CutoffSpec::log_power(2.0, 6.0), q, 6.0).ok);

    // intervals ill-defined: s < alpha + delta
    CHECK_THROWS_WITH_AS(
        interval_bounds_check(CutoffSpec::log_power(1.0, 3.5), p, 3.5),
        doctest::Contains("alpha + delta"), std::invalid_argument);
}

TEST_CASE("sign pattern on a dense grid") {
    for (const CutoffSpec& c : {CutoffSpec::linear(5.0), CutoffSpec::power(2.0, 5.0),
                                CutoffSpec::log_power(1.5, 5.0)}) {
        for (int i = 1; i < 400; ++i) {
            const double r = 5.0 * i / 400.0;
            const CutoffValue v = eval_cutoff(c, r);
            CHECK(v.f >= 0.0);
            CHECK(v.df <= 1e-15);
        }
    }
}

TEST_CASE("G telescopes for chi == 1 and reacts to step profiles") {
    const ChiProfile one;
    for (const CutoffSpec& c :
         {CutoffSpec::linear(6.0), CutoffSpec::power(2.0, 6.0),
          CutoffSpec::log_power(1.0, 6.0), CutoffSpec::huber(1.0, 3.0, 4.0, 6.0)}) {
        CHECK(G_term(c, one, 6.0) == doctest::Approx(1.0).epsilon(1e-10));
    }

    // linear cutoff, chi = 1 on [0,s0], -M beyond: G = 1 - (M+1)(1-s0/s)^2
    const double s = 6.0, s0 = 2.0, M = 3.0;
    const ChiProfile chi = ChiProfile::step({s0}, {1, -static_cast<int>(M)});
    const double expected = 1.0 - (M + 1.0) * (1.0 - s0 / s) * (1.0 - s0 / s);
    CHECK(G_term(CutoffSpec::linear(s), chi, s) ==
          doctest::Approx(expected).epsilon(1e-10));

    const ChiProfile zero = ChiProfile::step({}, {0});
    CHECK(G_term(CutoffSpec::linear(s), zero, s) == doctest::Approx(0.0));
}

TEST_CASE("G stays at most 1 for random chi <= 1") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const double s = rng.uniform(3.0, 12.0);
        std::vector<double> jumps;
        std::vector<int> values{1};
        double t = 0.0;
        const int n = 1 + static_cast<int>(rng.index(4));
        for (int i = 0; i < n; ++i) {
            t += rng.uniform(0.3, s / 2.0);
            jumps.push_back(t);
            values.push_back(1 - static_cast<int>(rng.index(6)));
        }
        const ChiProfile chi = ChiProfile::step(jumps, values);
        for (const CutoffSpec& c :
             {CutoffSpec::linear(s), CutoffSpec::log_power(2.0, s)}) {
            CHECK(G_term(c, chi, s) <= 1.0 + 1e-10);
        }
    }
}
