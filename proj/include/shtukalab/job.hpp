#pragma once

#include <map>
#include <optional>
#include <string>

#include "shtukalab/classify.hpp"

namespace shtukalab {

struct JobOptions {
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> cap;
    std::uint32_t ext_degree = 1;       // extension degree for pointcount
    bool expect_iso = false;
    std::vector<std::uint64_t> exponents; // for sseries / lisa
    std::uint32_t restrict_n = 0;         // for restrict-of-scalars aware commands
};

/// One parsed job: a field block, at most one object block of each kind, one
/// command, options.
struct Job {
    FqPtr field;
    std::optional<Shtuka> shtuka;
    std::optional<HopfPresentation> presentation;
    std::string cmd;
    JobOptions opts;
};

/// Parses the documented JSON job format. Diagnostics carry the offending
/// key/block or byte position; parsing never crashes.
Job parse_spec(const std::string& text);

struct Report {
    std::string human;
    std::map<std::string, std::string> machine; // sorted keys, deterministic
    int exit_code = 0;
};

Report run(const Job& job);

/// Renders the report: human section plus a sorted key=value block, or the
/// machine block alone.
std::string render(const Report& rep, bool machine_only);

} // namespace shtukalab
