#pragma once

#include <cstddef>
#include <iosfwd>

#include "run_config.hpp"

namespace vncs::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,     // I/O or usage problems
    kExitConfig = 2,
    kExitNumerical = 3,   // some point failed and --strict was given
    kExitIncomplete = 4,  // scan stopped by --max-points; rerun to resume
};

struct CommandOptions {
    bool strict = false;
    std::size_t max_points = 0;
    bool quiet = false;
};

int run_plan(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int run_scan(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int run_profile(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int run_report(const RunConfig& config, const CommandOptions& options, std::ostream& log);

}  // namespace vncs::cli
