#pragma once

// Helpers shared by the suite implementations.

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "fplab/drift.hpp"
#include "fplab/solvers.hpp"
#include "fplab/suites.hpp"

namespace fplab::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// splitmix64 of (seed, stream, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

nlohmann::json solver_json(const SolverConfig& cfg);
nlohmann::json drift_json(const DriftSpec& drift);

/// max_t |int rho(t) - int rho(0)|.
double max_mass_deviation(const Trajectory& traj);

/// At most `count` snapshots, evenly spaced, always keeping the last.
Trajectory thin(const Trajectory& traj, std::size_t count = 11);

/// Analytic random profile with sup bounded by `amplitude` (coefficient sum).
TrigProfile bounded_profile(int dim, int kmax, double amplitude, std::mt19937_64& rng);
ScalarField sample_profile(const Grid& grid, const TrigProfile& p, double offset = 0.0);

/// Heat semigroup exp(s eps Lap) on a 1D grid function via a direct O(N^2) DFT.
std::vector<double> heat_by_direct_dft(const std::vector<double>& data, double eps, double s);

/// Cole-Hopf solution -2 eps log(exp(s eps Lap) exp(-g / 2 eps)) of the quadratic HJ
/// equation a time s before the terminal datum g.
std::vector<double> cole_hopf_solution(const ScalarField& g, double eps, double s);

/// Executes jobs on the pool; a throwing job yields a record with `error` set.
std::vector<RunRecord> run_jobs(const std::vector<std::pair<std::string, std::function<RunRecord()>>>& jobs,
                                int threads);

/// Points per axis and step after applying the refinement flag.
int refined_points(int n, const SuiteContext& ctx);
double refined_step(double dt, const SuiteContext& ctx);

/// Adds a failure unless `ok`.
void expect(SuiteResult& out, bool ok, const std::string& message);

/// Largest per-run metric `key` over runs that finished (0 when none has it).
double max_run_metric(const SuiteResult& out, const std::string& key);

/// Records run errors as failures and counts non-passing reports.
void finalize(SuiteResult& out);

using SuiteFn = std::function<SuiteResult(Params&, const SuiteContext&)>;

SuiteResult suite_heat_kernel(Params& p, const SuiteContext& ctx);
SuiteResult suite_cole_hopf(Params& p, const SuiteContext& ctx);
SuiteResult suite_stability(Params& p, const SuiteContext& ctx);
SuiteResult suite_main2_dual(Params& p, const SuiteContext& ctx);
SuiteResult suite_one_sided(Params& p, const SuiteContext& ctx);
SuiteResult suite_hjlip(Params& p, const SuiteContext& ctx);
SuiteResult suite_superquadratic(Params& p, const SuiteContext& ctx);
SuiteResult suite_l1(Params& p, const SuiteContext& ctx);
SuiteResult suite_benton(Params& p, const SuiteContext& ctx);

}  // namespace fplab::detail
