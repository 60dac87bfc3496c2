#include "proxtrace_cli/manifest.hpp"

#include <fstream>
#include <iterator>
#include <json.hpp>

#include "proxtrace/device_id.hpp"
#include "proxtrace/error.hpp"

namespace proxtrace::cli {

namespace {

std::string canonical_parameters(const std::map<std::string, std::string>& params) {
  std::string text;
  for (const auto& [k, v] : params) text += k + "=" + v + "\n";
  return text;
}

}  // namespace

std::string RunManifest::config_digest() const {
  const auto d = sha256(canonical_parameters(parameters));
  return to_hex(d);
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::lookup, "cannot read " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return to_hex(sha256(bytes));
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["config_digest"] = config_digest();
  j["parameters"] = parameters;
  auto outs = nlohmann::ordered_json::array();
  for (const auto& p : outputs) {
    outs.push_back({{"path", p.string()}, {"sha256", file_digest(p)}});
  }
  j["outputs"] = std::move(outs);
  return j.dump(2) + "\n";
}

void RunManifest::write(const std::filesystem::path& path) const {
  const auto text = to_json();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::validation, "cannot write " + path.string());
  out << text;
}

}  // namespace proxtrace::cli
