#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "stab/metric.hpp"

using namespace stab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("registry curvature closed forms") {
    CHECK(curvature(WarpedMetric::euclidean(), 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(curvature(WarpedMetric::hyperbolic(1.0), 2.0) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(curvature(WarpedMetric::sphere(2.0), 1.0) == doctest::Approx(2.0).epsilon(1e-13));
    // tau proportional to r^{1+eps} has K = -eps(1+eps)/r^2
    CHECK(curvature(WarpedMetric::schoen(0.5), 2.0) == doctest::Approx(-0.1875).epsilon(1e-13));
    CHECK(curvature(WarpedMetric::schoen(1.0), 2.0) == doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("curvature domain and degeneracy errors") {
    const WarpedMetric sph = WarpedMetric::sphere(1.0);
    CHECK_THROWS_AS(curvature(sph, 4.0), std::domain_error);
    CHECK_THROWS_AS(curvature(WarpedMetric::euclidean(), -1.0), std::domain_error);
    const WarpedMetric flatliner =
        WarpedMetric::custom([](double) { return 1e-301; }, 0.0, 10.0, "degenerate");
    CHECK_THROWS_AS(curvature(flatliner, 1.0), std::runtime_error);
}

TEST_CASE("boundary length and disk area") {
    const WarpedMetric flat = WarpedMetric::euclidean();
    CHECK(boundary_length(flat, 2.0) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(disk_area(flat, 3.0) == doctest::Approx(9.0 * kPi).epsilon(1e-12));

    const WarpedMetric hyp = WarpedMetric::hyperbolic(1.0);
    CHECK(disk_area(hyp, 1.0) ==
          doctest::Approx(2.0 * kPi * (std::cosh(1.0) - 1.0)).epsilon(1e-11));

    const WarpedMetric sch = WarpedMetric::schoen(0.5);
    const double expected = 2.0 * kPi * std::pow(4.0, 2.5) / (0.5 * 1.5);
    CHECK(disk_area(sch, 4.0) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("curvature integral matches closed forms") {
    CHECK(curvature_integral(WarpedMetric::euclidean(), 5.0) == doctest::Approx(0.0));
    CHECK(curvature_integral(WarpedMetric::sphere(1.0), kPi / 2.0) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-11));
    CHECK(curvature_integral(WarpedMetric::hyperbolic(1.0), 2.0) ==
          doctest::Approx(2.0 * kPi * (1.0 - std::cosh(2.0))).epsilon(1e-11));
}

TEST_CASE("Gauss-Bonnet consistency on smooth registry metrics") {
    for (const WarpedMetric& m : {WarpedMetric::euclidean(), WarpedMetric::hyperbolic(1.0),
                                  WarpedMetric::hyperbolic(0.3), WarpedMetric::sphere(1.0),
                                  WarpedMetric::cone(1.0)}) {
        REQUIRE(m.smooth_origin());
        for (double s : {0.3, 0.9, 1.8, 2.7}) {
            if (s >= m.r_max()) continue;
            CHECK(std::abs(curvature_integral(m, s) - 2.0 * kPi * (1.0 - m.dtau(s))) <=
                  1e-8);
        }
    }
}

TEST_CASE("kmin profile") {
    CHECK(kmin_profile(WarpedMetric::euclidean(), 5.0) == doctest::Approx(0.0));
    // monotone decreasing integral: minimum at the endpoint
    CHECK(kmin_profile(WarpedMetric::hyperbolic(1.0), 3.0) ==
          doctest::Approx(2.0 * kPi * (1.0 - std::cosh(3.0))).epsilon(1e-9));
    // positive curvature: integral nonnegative, minimum at s = 0
    CHECK(kmin_profile(WarpedMetric::sphere(1.0), 1.0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("annulus area") {
    CHECK(annulus_area(WarpedMetric::euclidean(), 1.0, 2.0) ==
          doctest::Approx(3.0 * kPi).epsilon(1e-12));
    CHECK(annulus_area(WarpedMetric::hyperbolic(1.0), 1.3, 1.3) == 0.0);
    const double expected = (2.0 * kPi / 0.75) * (std::pow(2.0, 2.5) - 1.0);
    CHECK(annulus_area(WarpedMetric::schoen(0.5), 1.0, 2.0) ==
          doctest::Approx(expected).epsilon(1e-10));
    CHECK_THROWS_AS(annulus_area(WarpedMetric::euclidean(), 2.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("area is strictly increasing") {
    for (const WarpedMetric& m :
         {WarpedMetric::euclidean(), WarpedMetric::hyperbolic(1.0),
          WarpedMetric::schoen(0.5), WarpedMetric::cone(0.5)}) {
        double prev = 0.0;
        for (int i = 1; i <= 12; ++i) {
            const double area = disk_area(m, 0.4 * i);
            CHECK(area > prev);
            prev = area;
        }
    }
}

TEST_CASE("Shiohama-Tanaka slack") {
    const ChiProfile one;
    CHECK(shiohama_tanaka_slack({WarpedMetric::euclidean(), one}, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(shiohama_tanaka_slack({WarpedMetric::hyperbolic(1.0), one}, 2.0)) <=
          1e-6);
    // cone point: 2 pi (1 - beta) of curvature never enters the integral
    CHECK(shiohama_tanaka_slack({WarpedMetric::cone(0.5), one}, 1.0) ==
          doctest::Approx(kPi).epsilon(1e-9));

    for (const WarpedMetric& m :
         {WarpedMetric::euclidean(), WarpedMetric::hyperbolic(1.0),
          WarpedMetric::sphere(1.0), WarpedMetric::cone(0.7), WarpedMetric::schoen(1.0)}) {
        for (int i = 1; i <= 24; ++i) {
            const double r = 0.12 * i;
            if (r >= m.r_max()) continue;
            CHECK(shiohama_tanaka_slack({m, one}, r) >= -1e-8);
        }
    }
}

TEST_CASE("finite differences agree with analytic tau derivatives") {
    for (const WarpedMetric& m :
         {WarpedMetric::euclidean(), WarpedMetric::hyperbolic(1.0),
          WarpedMetric::sphere(0.08), WarpedMetric::cone(0.6), WarpedMetric::schoen(0.5)}) {
        for (int i = 0; i <= 20; ++i) {
            const double r = 0.1 + (10.0 - 0.1) * i / 20.0;
            if (r >= m.r_max()) continue;
            const double h = 1e-5 * std::max(1.0, r);
            const double fd1 = (m.tau(r + h) - m.tau(r - h)) / (2.0 * h);
            const double fd2 = (m.tau(r + h) - 2.0 * m.tau(r) + m.tau(r - h)) / (h * h);
            CHECK(m.dtau(r) == doctest::Approx(fd1).epsilon(1e-6));
            if (std::abs(m.d2tau(r)) > 1e-6)
                CHECK(m.d2tau(r) == doctest::Approx(fd2).epsilon(1e-4));
        }
    }
}

TEST_CASE("chi profiles validate and evaluate") {
    const ChiProfile chi = ChiProfile::step({2.0, 5.0}, {1, 0, -3});
    CHECK(chi(1.0) == 1);
    CHECK(chi(2.0) == 0);
    CHECK(chi(4.9) == 0);
    CHECK(chi(5.0) == -3);
    CHECK(chi.max_value() == 1);
    CHECK_THROWS_AS(ChiProfile::step({1.0}, {2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(ChiProfile::step({1.0}, {1}), std::invalid_argument);
}

TEST_CASE("custom CSV metric ingestion") {
    const std::string path = "test_metric_profile.csv";
    {
        std::ofstream out(path);
        out << "r,tau\n";
        for (int i = 0; i <= 100; ++i) {
            const double r = 0.05 + i * 0.05;
            out << r << "," << std::sinh(r) << "\n";
        }
    }
    const WarpedMetric m = WarpedMetric::from_csv(path);
    CHECK_FALSE(m.analytic());
    CHECK(m.tau(2.0) == doctest::Approx(std::sinh(2.0)).epsilon(1e-6));
    CHECK(curvature(m, 2.0) == doctest::Approx(-1.0).epsilon(1e-3));
    // spline derivatives keep tight-tolerance quadratures convergent
    CHECK(disk_area(m, 4.0) ==
          doctest::Approx(2.0 * kPi * (std::cosh(4.0) - std::cosh(0.05))).epsilon(1e-5));
    CHECK(std::isfinite(curvature_integral(m, 4.0)));

    {
        std::ofstream out("test_metric_short.csv");
        out << "r,tau\n0.1,0.1\n0.2,0.2\n";
    }
    CHECK_THROWS_AS(WarpedMetric::from_csv("test_metric_short.csv"), std::invalid_argument);
    std::remove(path.c_str());
    std::remove("test_metric_short.csv");
}
