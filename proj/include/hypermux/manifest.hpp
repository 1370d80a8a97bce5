#pragma once
#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hypermux {

// Reproducibility record emitted next to every CLI run: the exact argv,
// the resolved configuration, seeds, input digests, and per-stage wall
// clock. Replaying the stored argv reproduces the data outputs
// byte-identically; the timings block is the only nondeterministic part.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv);

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void add_input(const std::filesystem::path& path);   // records path + digest
  void add_output(const std::filesystem::path& path);
  void add_timing(const std::string& stage, double milliseconds);

  void write(const std::filesystem::path& path) const;
  nlohmann::json to_json() const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  nlohmann::json config_;
  std::vector<std::pair<std::string, std::string>> inputs_;  // path, digest
  std::vector<std::string> outputs_;
  std::vector<std::pair<std::string, double>> timings_ms_;
};

// Simple wall-clock scope helper for manifest timings.
class StageClock {
 public:
  StageClock() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace hypermux
