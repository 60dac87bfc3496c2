#pragma once

// Provenance record written next to every file output as <out>.manifest.json.
// Deliberately free of timestamps and hostnames so that two identical runs
// produce identical manifests.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace proxtrace::cli {

struct RunManifest {
  std::string command;
  /// Every parameter that influences output bytes, rendered as text.
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::vector<std::filesystem::path> outputs;

  /// SHA-256 over the canonical parameter rendering.
  std::string config_digest() const;
  /// JSON with the outputs' SHA-256 digests filled in from disk.
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

std::string file_digest(const std::filesystem::path& path);

}  // namespace proxtrace::cli
