#pragma once

// Command implementations behind the afsec CLI, kept in the library so tests
// can drive them without spawning a process.

#include "afsec/convex_core.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace afsec {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitMismatch = 3,
    kExitSolver = 4,
};

/// method: degraded | degraded-total | zf | scaled | symmetric | oracle.
/// Prints the SolveReport as JSON on success.
int run_single(const std::string& instance_path, std::string_view method, const SolverConfig& cfg,
               std::ostream& out, std::ostream& err);

int run_oracle(const std::string& instance_path, int steps, int refine, std::ostream& out,
               std::ostream& err);

struct ExperimentRequest {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_path;
    std::optional<unsigned> threads;
    std::string format = "csv"; // csv | json
    bool per_instance = false;  // also write <out>.instances.csv
};

/// Runs the sweep; the aggregate table goes to the output path (stdout when
/// none is given). Exit 4 when any instance violates the bound ordering.
int run_experiment(const ExperimentRequest& request, const SolverConfig& cfg, std::ostream& out,
                   std::ostream& err);

} // namespace afsec
