#pragma once

#include <cstdint>

namespace corrmate {

// Every tolerance used by the library flows from one record.
struct Config {
    double epsilon = 1e-9;        // membership and equality tests
    double root_tol = 1e-8;       // fiber residuals, chordal
    double cluster_radius = 1e-6; // base radius for multiple-root clustering
    double trust_radius = 0.05;   // local model radius for the deck transformation
    int max_iter = 200;
    std::uint64_t seed = 1;
    int threads = 0;              // 0 means hardware concurrency

    void validate() const;
};

} // namespace corrmate
