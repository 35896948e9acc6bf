#pragma once

#include <string>
#include <vector>

namespace vidmeter::cli {

/// Entry point behind the `vidmeter` binary. Subcommands: ingest, stats,
/// fit, scale, synth, simulate, cycle, serve. Returns 0 on success, 1 on
/// usage errors, 2 on data errors.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace vidmeter::cli
