#include "fplab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "suite_common.hpp"

namespace fplab {

namespace detail {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + stream * 0xBF58476D1CE4E5B9ULL + index + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

nlohmann::json solver_json(const SolverConfig& cfg) {
  return {{"epsilon", cfg.epsilon},
          {"dt", cfg.dt},
          {"mesh", cfg.mesh == TimeMeshKind::Uniform ? "uniform" : "geometric"},
          {"t_start", cfg.t_start},
          {"t_end", cfg.t_end},
          {"geometric_ratio", cfg.geometric_ratio},
          {"record_every", cfg.record_every},
          {"scheme", to_string(cfg.scheme)},
          {"cfl", cfg.cfl}};
}

nlohmann::json drift_json(const DriftSpec& drift) {
  const auto& v = drift.validation();
  nlohmann::json tags = nlohmann::json::array();
  if (drift.tags().divergence_free) tags.push_back("divergence_free");
  if (drift.tags().bounded) tags.push_back("bounded");
  if (const auto& t = drift.tags().divb_lrlq) {
    tags.push_back({{"divb_LrLq", {{"q", t->q.str()}, {"r", t->r.str()}, {"margin", t->margin},
                                   {"time_power", t->time_power}, {"spatial_norm", t->spatial_norm}}}});
  }
  if (const auto& t = drift.tags().one_sided) tags.push_back({{"one_sided_1_over_t", {{"c1", t->c1}, {"c2", t->c2}}}});
  return {{"kind", drift.kind()},
          {"dim", drift.dim()},
          {"params", drift.params()},
          {"tags", tags},
          {"validation",
           {{"points", v.validation_points},
            {"time_samples", v.time_samples},
            {"max_divergence_error", v.max_divergence_error},
            {"one_sided_excess", v.one_sided_excess},
            {"passed", v.passed}}}};
}

double max_mass_deviation(const Trajectory& traj) {
  const double m0 = integral(traj.field(0));
  double dev = 0.0;
  for (const auto& f : traj.fields()) dev = std::max(dev, std::abs(integral(f) - m0));
  return dev;
}

Trajectory thin(const Trajectory& traj, std::size_t count) {
  Trajectory out(traj.grid());
  const std::size_t n = traj.size();
  if (n <= count) return traj;
  std::size_t last = n;  // sentinel
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t i = (j * (n - 1)) / (count - 1);
    if (i == last) continue;
    out.push_back(traj.time(i), traj.field(i));
    last = i;
  }
  return out;
}

TrigProfile bounded_profile(int dim, int kmax, double amplitude, std::mt19937_64& rng) {
  const TrigProfile p = random_profile(dim, kmax, 0.0, rng);
  double sum = 0.0;
  for (const auto& m : p.modes()) sum += std::abs(m.a_cos) + std::abs(m.a_sin);
  return sum > 0.0 ? p.scaled(amplitude / sum) : p;
}

ScalarField sample_profile(const Grid& grid, const TrigProfile& p, double offset) {
  return ScalarField::sample(grid, [&](const Point& x) { return offset + p.value(x); });
}

std::vector<RunRecord> run_jobs(const std::vector<std::pair<std::string, std::function<RunRecord()>>>& jobs,
                                int threads) {
  std::vector<RunRecord> out(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    Stopwatch clock;
    try {
      out[i] = jobs[i].second();
      out[i].id = jobs[i].first;
    } catch (const std::exception& e) {
      out[i] = RunRecord{};
      out[i].id = jobs[i].first;
      out[i].error = e.what();
    }
    out[i].seconds = clock.seconds();
  });
  return out;
}

int refined_points(int n, const SuiteContext& ctx) { return ctx.refined ? 2 * n : n; }
double refined_step(double dt, const SuiteContext& ctx) { return ctx.refined ? 0.5 * dt : dt; }

void expect(SuiteResult& out, bool ok, const std::string& message) {
  if (!ok) out.failures.push_back(message);
}

double max_run_metric(const SuiteResult& out, const std::string& key) {
  double worst = 0.0;
  for (const auto& run : out.runs) {
    const auto it = run.metrics.find(key);
    if (it != run.metrics.end()) worst = std::max(worst, it->second);
  }
  return worst;
}

void finalize(SuiteResult& out) {
  int failed = 0;
  int hypothesis = 0;
  int total = 0;
  for (const auto& run : out.runs) {
    if (!run.error.empty()) out.failures.push_back("run " + run.id + " failed: " + run.error);
    for (const auto& r : run.reports) {
      ++total;
      if (r.status == ReportStatus::EstimateFailed) ++failed;
      if (r.status == ReportStatus::HypothesisFailed) ++hypothesis;
    }
  }
  out.metrics["reports"] = total;
  out.metrics["reports_estimate_failed"] = failed;
  out.metrics["reports_hypothesis_failed"] = hypothesis;
}

}  // namespace detail

bool SuiteResult::passed() const {
  if (!failures.empty()) return false;
  for (const auto& run : runs) {
    if (!run.error.empty()) return false;
    for (const auto& r : run.reports) {
      if (r.status == ReportStatus::EstimateFailed) return false;
    }
  }
  return true;
}

std::vector<const EstimateReport*> SuiteResult::reports() const {
  std::vector<const EstimateReport*> out;
  for (const auto& run : runs) {
    for (const auto& r : run.reports) out.push_back(&r);
  }
  return out;
}

namespace {

const std::vector<std::pair<std::string, detail::SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, detail::SuiteFn>> suites = {
      {"heat_kernel", detail::suite_heat_kernel}, {"cole_hopf", detail::suite_cole_hopf},
      {"stability", detail::suite_stability},     {"main2_dual", detail::suite_main2_dual},
      {"one_sided", detail::suite_one_sided},     {"hjlip", detail::suite_hjlip},
      {"superquadratic", detail::suite_superquadratic}, {"l1", detail::suite_l1},
      {"benton", detail::suite_benton},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

bool is_suite(const std::string& name) {
  const auto names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SuiteResult run_suite(const std::string& name, Params params, const SuiteContext& ctx) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    detail::Stopwatch clock;
    SuiteResult out = fn(params, ctx);
    out.name = name;
    out.timings["total_seconds"] = clock.seconds();
    detail::finalize(out);
    return out;
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

SuiteResult compare_refinement(const std::vector<SuiteResult>& base, const std::vector<SuiteResult>& refined,
                               double fraction) {
  SuiteResult out;
  out.name = "refinement";
  int compared = 0;
  int flips = 0;
  double worst = 0.0;
  for (const auto& b : base) {
    double suite_worst = 0.0;
    const auto it = std::find_if(refined.begin(), refined.end(), [&](const SuiteResult& r) { return r.name == b.name; });
    if (it == refined.end()) {
      out.failures.push_back("suite " + b.name + " has no refined rerun");
      continue;
    }
    for (const auto& run : b.runs) {
      const auto rr = std::find_if(it->runs.begin(), it->runs.end(), [&](const RunRecord& x) { return x.id == run.id; });
      if (rr == it->runs.end()) continue;
      for (const auto& rep : run.reports) {
        const auto match = std::find_if(rr->reports.begin(), rr->reports.end(), [&](const EstimateReport& x) {
          return x.theorem == rep.theorem && x.label == rep.label;
        });
        if (match == rr->reports.end()) continue;
        ++compared;
        if (rep.passed() && !match->passed()) {
          ++flips;
          out.failures.push_back(b.name + "/" + run.id + "/" + rep.label + " flips from pass to fail");
        }
        const double scale = std::max(std::abs(rep.rhs), std::abs(match->rhs));
        const double change = scale > 0.0 ? std::abs(match->slack - rep.slack) / scale : 0.0;
        if (rep.passed() && change > fraction) {
          out.failures.push_back(b.name + "/" + run.id + "/" + rep.label + " slack changes by " +
                                 format_number(change) + " of the RHS");
        }
        if (rep.passed()) suite_worst = std::max(suite_worst, change);
      }
    }
    out.metrics["max_relative_slack_change " + b.name] = suite_worst;
    worst = std::max(worst, suite_worst);
    for (const auto& run : it->runs) {
      if (!run.error.empty()) out.failures.push_back("refined " + b.name + "/" + run.id + " failed: " + run.error);
    }
  }
  out.metrics["compared_reports"] = compared;
  out.metrics["pass_to_fail_flips"] = flips;
  out.metrics["max_relative_slack_change"] = worst;
  if (compared == 0) out.failures.push_back("no reports to compare");
  return out;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fplab
