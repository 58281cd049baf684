#pragma once

// Command dispatch: each command writes its CSV series and summary.json into
// the configured output directory.

#include <exception>
#include <iosfwd>
#include <string>

#include "spdegal/config.hpp"

namespace spdegal {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int other = 1;
inline constexpr int validation = 2;
inline constexpr int divergence = 3;
inline constexpr int property_failure = 4;
inline constexpr int io = 5;
}  // namespace exit_code

// Returns ok, or property_failure when verify finds a violated hard property.
// Errors propagate as exceptions.
int run(const RunConfig& cfg, unsigned threads, std::ostream& log);

int exit_code_for(const std::exception& e);

// run() with every error reported on `err` and mapped to its exit code.
int run_guarded(const RunConfig& cfg, unsigned threads, std::ostream& log, std::ostream& err);

}  // namespace spdegal
