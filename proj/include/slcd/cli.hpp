#pragma once

/**
 * @file cli.hpp
 * @brief Command-line driver. Subcommands: synth, candidates, nms, score,
 *        detect, hiou, vp, symmetry, retrieve, group.
 *
 * Exit codes: 0 success, 1 usage error, 2 data error. Errors go to the
 * standard error stream.
 */

#include <string>
#include <vector>

namespace slcd {

/// Runs one CLI invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace slcd
