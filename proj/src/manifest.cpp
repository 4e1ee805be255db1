#include "skilldecomp/manifest.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "skilldecomp/csv.hpp"
#include "skilldecomp/types.hpp"

namespace skilldecomp {

namespace {

std::string timestamp_utc() {
  std::time_t t;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs[path.filename().string()] = fnv1a_digest(path);
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs[path.filename().string()] = fnv1a_digest(path);
}

void RunManifest::write(const std::filesystem::path& dir) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  j["timestamp"] = timestamp_utc();
  if (seed) j["seed"] = *seed;
  j["config"] = config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorCode::Input, (dir / "manifest.json").string());
  out << j.dump(2) << "\n";
}

}  // namespace skilldecomp
