#pragma once

#include "horoforge/cli/registry.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace horoforge::cli {

inline constexpr const char* kSchema = "horoforge/1";

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1, // a verify criterion, invariance check or boundary limit failed
    exit_usage = 2,        // bad flags, config or point syntax, domain errors
};

/// Runs the command line (without the program name). Reports go to out, or to
/// --out when given; diagnostics and the verify summary go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const GeometryRegistry& registry = GeometryRegistry::with_builtins());

/// Config sections and keys the CLI understands. A section whose key set
/// contains "*" accepts any key; [plugin] is reserved for custom geometries.
const Config::Schema& config_schema();

} // namespace horoforge::cli
