#pragma once

// The oracle/property suite behind `validate`: every check pairs a library
// code path with an independent route (quadrature, direct series, explicit
// matrices, or Monte Carlo) and a pinned tolerance.

#include <cstdint>
#include <string>
#include <vector>

namespace otfsop::cli {

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double observed = 0.0;
    bool pass = false;
};

std::vector<CheckResult> run_validation(std::uint64_t seed, bool inject_failure);

}  // namespace otfsop::cli
