#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stab/indexform.hpp"

namespace stab {

/// One draw of the randomized inequality suite.
struct SuiteDraw {
    std::string metric;
    std::string potential;
    std::string cutoff;
    double a = 0.0, b = 0.0, delta = 0.0, s = 0.0;
    double cm_slack = 0.0;        // normalized
    double estimate_slack = 0.0;  // normalized
    bool pass = false;
};

struct SuiteResult {
    std::uint64_t seed = 0;
    int requested = 0;
    std::vector<SuiteDraw> draws;
    double worst_cm_slack = 0.0;
    double worst_estimate_slack = 0.0;
    int failures = 0;
    bool pass = false;
};

/// Runs `draws` admissible random draws of (metric, potential, a, b, delta, s)
/// against the plateau-cutoff and log-power inequality reports. Deterministic
/// for a fixed seed; `jobs` only parallelizes evaluation, never ordering.
SuiteResult run_inequality_suite(std::uint64_t seed, int draws, int jobs = 1);

}  // namespace stab
