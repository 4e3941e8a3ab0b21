#pragma once

// Run manifests: every file the CLI writes is accompanied by
// <output>.manifest.json recording the resolved parameters, input digests and
// tool version, so a run can be reproduced bit-identically via --config.

#include "sha256.hpp"

#include "json.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace netres::tools {

inline constexpr const char* tool_name = "netres";
inline constexpr const char* tool_version = "0.1.0";

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  nlohmann::json parameters;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::vector<std::string> outputs;

  void add_input(const std::string& path) { inputs.emplace_back(path, sha256_file(path)); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = {{"name", tool_name}, {"version", tool_version}};
    j["command"] = command;
    j["parameters"] = parameters;
    j["inputs"] = nlohmann::json::array();
    for (const auto& [path, digest] : inputs)
      j["inputs"].push_back({{"path", path}, {"sha256", digest}});
    j["outputs"] = outputs;
    j["timestamp"] = utc_timestamp();
    return j;
  }

  // Writes <output_path>.manifest.json next to an output file.
  void write_for(const std::string& output_path) const {
    const std::string path = output_path + ".manifest.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << to_json().dump(2) << "\n";
  }
};

inline nlohmann::json load_manifest_parameters(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config/manifest: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("parameters")) return j["parameters"];
  return j;  // accept a bare parameters object too
}

}  // namespace netres::tools
