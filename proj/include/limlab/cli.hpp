#pragma once

#include <iosfwd>
#include <string>

#include "limlab/serialize.hpp"

namespace limlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitFailure = 4;

/// Diagnostics report for a weight: rp, A_p and A_q sweeps, doubling, infima and predictions.
Json classify_weight(const WeightSpec& spec, double p, int i_max, const QuadratureConfig& quad);

struct CommandOutput {
    std::string text;
    int exit_code = kExitOk;
};

/// Execute a resolved run configuration; the output embeds the configuration.
CommandOutput execute_run_config(const Json& config);

/// Recover the run configuration embedded in a JSON report or CSV trace.
Json embedded_run_config(const std::string& report_text);

/// Command-line entry point. Reports go to --out (atomically) or `out`; diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace limlab
