#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace skilldecomp {

/// Flat `section.key = value` configuration file.
std::map<std::string, std::string> parse_config(const std::filesystem::path& path);

/// Entry point behind the CLI binary: dispatches the subcommands
/// (ingest, simulate, fit, residuals, counterfactual, pairing, compare,
/// report), returning the process exit code. Errors print a single
/// `E_<CODE>: <detail>` line on stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace skilldecomp
