#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nilact {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;   // deterministic (no timings)
    double seconds = 0.0; // wall time, reported out-of-band
};

// The acceptance checks, in order. Heavy checks respect `threads`; outputs
// are identical for any thread count.
std::vector<CheckResult> run_acceptance_checks(std::uint64_t seed, int threads);

} // namespace nilact
