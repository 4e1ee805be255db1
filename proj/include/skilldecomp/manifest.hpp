#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace skilldecomp {

/// Reproducibility record written beside every output bundle. The timestamp
/// honors SOURCE_DATE_EPOCH so identical runs produce identical bundles.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;   // flattened flag/config snapshot
  std::map<std::string, std::string> inputs;   // path -> content digest
  std::map<std::string, std::string> outputs;  // path -> content digest
  std::optional<std::uint64_t> seed;
  std::string version = "0.1.0";

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void write(const std::filesystem::path& dir) const;
};

}  // namespace skilldecomp
