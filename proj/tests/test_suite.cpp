#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stab/suite.hpp"

using namespace stab;

TEST_CASE("randomized inequality suite passes and is deterministic") {
    const SuiteResult a = run_inequality_suite(20240405, 60, 2);
    CHECK(a.pass);
    CHECK(static_cast<int>(a.draws.size()) == 60);
    CHECK(a.worst_cm_slack >= kSlackTolerance);
    CHECK(a.worst_estimate_slack >= kSlackTolerance);

    // identical seed reproduces every draw bit-for-bit, independent of jobs
    const SuiteResult b = run_inequality_suite(20240405, 60, 1);
    REQUIRE(a.draws.size() == b.draws.size());
    for (std::size_t i = 0; i < a.draws.size(); ++i) {
        CHECK(a.draws[i].metric == b.draws[i].metric);
        CHECK(a.draws[i].s == b.draws[i].s);
        CHECK(a.draws[i].cm_slack == b.draws[i].cm_slack);
        CHECK(a.draws[i].estimate_slack == b.draws[i].estimate_slack);
    }

    // a different seed draws a different sample
    const SuiteResult c = run_inequality_suite(7, 60, 2);
    CHECK(c.pass);
    bool any_diff = false;
    for (std::size_t i = 0; i < std::min(a.draws.size(), c.draws.size()); ++i)
        any_diff = any_diff || a.draws[i].s != c.draws[i].s;
    CHECK(any_diff);
}
