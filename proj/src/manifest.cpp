#include "hypermux/manifest.hpp"

#include "hypermux/io.hpp"
#include "hypermux/version.hpp"

namespace hypermux {

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)) {}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs_.emplace_back(path.string(), file_digest(path));
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs_.push_back(path.string());
}

void RunManifest::add_timing(const std::string& stage, double milliseconds) {
  timings_ms_.emplace_back(stage, milliseconds);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "hypermux";
  j["version"] = kVersion;
  j["command"] = command_;
  j["argv"] = argv_;
  j["config"] = config_;
  j["inputs"] = nlohmann::json::array();
  for (const auto& [path, digest] : inputs_)
    j["inputs"].push_back({{"path", path}, {"digest", digest}});
  j["outputs"] = outputs_;
  j["timings_ms"] = nlohmann::json::object();
  for (const auto& [stage, ms] : timings_ms_) j["timings_ms"][stage] = ms;
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
  atomic_write(path, to_json().dump(2) + "\n");
}

}  // namespace hypermux
