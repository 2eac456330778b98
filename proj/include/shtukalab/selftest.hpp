#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shtukalab/classify.hpp"

namespace shtukalab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    std::optional<std::string> counterexample_job; // replayable job file content
};

/// Runs the acceptance criteria with the given seed. All randomized draws come
/// from the documented splitmix64 generator, so failures replay exactly.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, bool fail_fast, std::ostream* progress);

} // namespace shtukalab
