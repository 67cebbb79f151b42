#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "abc/workbench.hpp"

namespace abc::cli {

inline constexpr const char* kDefaultModelPath = "threat-model.json";

// utc_timestamp, unless ABC_FIXED_TIMESTAMP pins every audit timestamp
// (reproducible logs in scripts and tests).
Workbench::Clock clock_from_env();

// Runs one command line; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Workbench::Clock& clock = clock_from_env());

}  // namespace abc::cli
