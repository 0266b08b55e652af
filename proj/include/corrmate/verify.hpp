#pragma once

#include "corrmate/config.hpp"
#include "corrmate/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace corrmate {

struct SuiteResult {
    enum class Status { Pass, Fail, Skip };
    Status status = Status::Pass;
    std::string detail;
};

struct Suite {
    const char* name;
    SuiteResult (*run)(int n, int p, const Config& cfg);
};

/// The registered invariant suites, in run order. `verify` runs exactly these.
const std::vector<Suite>& verify_suites();

/// Base map of the family for (n, p): A for n = 1 and even p, B for n = 1 and odd p, C for
/// n >= 3 (critical data the p-th roots of unity). Nothing for n = 2.
std::optional<RationalMap> base_map(int n, int p, const Config& cfg = {});

} // namespace corrmate
