#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "hmaps/config.hpp"

namespace hmaps {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

// Executes one subcommand. Tables go to the `out` key's file (or to `out`
// when unset); summaries go to `out`. Throws on failure.
void run(const RunConfig& cfg, std::ostream& out);

// Full command line (without argv[0]): handles --config FILE and --help, maps
// exceptions to exit codes and prints a one-line diagnostic to err.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err,
            bool color = false);

std::string usage();

}  // namespace hmaps
