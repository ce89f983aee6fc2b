#pragma once

// Experiment orchestration and the on-disk layout of its results
// (documented in docs/formats.md).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fplab/config.hpp"
#include "fplab/suites.hpp"

namespace fplab {

inline constexpr int kManifestSchemaVersion = 1;

struct ExperimentOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::filesystem::path> out_dir;
};

struct ExperimentResult {
  std::string id;
  std::filesystem::path dir;
  std::vector<SuiteResult> suites;
  /// Refined reruns, named "<suite>:refined".
  std::vector<SuiteResult> refined;

  [[nodiscard]] bool any_error() const;
  [[nodiscard]] bool any_estimate_failure() const;
  /// HypothesisFailed reports outside negative-control runs.
  [[nodiscard]] bool any_hypothesis_failure() const;
  /// 1 for errors, else 2 for estimate failures, else 3 for hypothesis failures, else 0.
  [[nodiscard]] int exit_code() const;
  [[nodiscard]] const SuiteResult* find(const std::string& name) const;
};

/// Version string baked in at configure time.
std::string code_version();

/// Lowercase hex SHA-256.
std::string sha256_hex(const void* data, std::size_t size);

/// Validates every section first, then runs the suites in order and writes
/// manifest.json, reports.json, reports.csv and timing.json under out_dir/id.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& opts = {});

/// Problems found while checking that every file the manifest references
/// exists and has the recorded hash; empty when consistent.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace fplab
