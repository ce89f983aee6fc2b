#pragma once

// Named verification suites. Each one builds its runs from a config
// section, executes them on a worker pool and collects reports.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fplab/config.hpp"
#include "fplab/grid.hpp"
#include "fplab/report.hpp"

namespace fplab {

struct SeriesRecord {
  std::string name;
  TimeSeries series;
};

struct RunRecord {
  std::string id;  // unique within the suite
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json drift;  // validation record or null
  std::vector<SeriesRecord> series;
  std::vector<std::pair<std::string, Trajectory>> trajectories;
  std::vector<EstimateReport> reports;
  /// Deterministic per-run scalars.
  std::map<std::string, double> metrics;
  /// Set on runs built to violate a hypothesis; their HypothesisFailed reports are expected.
  bool negative_control = false;
  std::string error;  // set when the run threw
  double seconds = 0.0;  // wall clock, kept out of hashed content
};

struct SuiteResult {
  std::string name;
  std::vector<RunRecord> runs;
  /// Deterministic scalar summaries.
  std::map<std::string, double> metrics;
  /// Wall-clock seconds; kept out of hashed content.
  std::map<std::string, double> timings;
  /// Suite-level assertions that did not hold.
  std::vector<std::string> failures;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::vector<const EstimateReport*> reports() const;
};

struct SuiteContext {
  std::uint64_t seed = 1;
  int threads = 1;
  /// Doubles N and halves dt (square-roots geometric ratios); drifts and data stay fixed.
  bool refined = false;
  /// Reads and checks the parameters, then returns without running anything.
  bool validate_only = false;
};

/// Registered suite names in a canonical order.
std::vector<std::string> suite_names();
bool is_suite(const std::string& name);

/// Runs one suite; unknown keys in `params` raise ConfigError before any work starts.
SuiteResult run_suite(const std::string& name, Params params, const SuiteContext& ctx);

/// Compares a refined rerun against its base: pass never flips to fail and
/// |slack change| <= fraction * max(|rhs|) for every report present in both.
SuiteResult compare_refinement(const std::vector<SuiteResult>& base, const std::vector<SuiteResult>& refined,
                               double fraction = 0.1);

/// Calls fn(i) for i < count on `threads` workers; the first exception is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace fplab
