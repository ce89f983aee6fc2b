// Energy and L^p stability of Fokker-Planck runs with irregular drifts.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "fplab/checks_section2.hpp"
#include "suite_common.hpp"

namespace fplab::detail {

namespace {

constexpr std::uint64_t kStabilityStream = 2;
constexpr std::uint64_t kMain2Stream = 3;


/// 1 + zero-mean profile with sup <= 1/2: positive with unit mass.
ScalarField positive_density(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_profile(grid, bounded_profile(grid.dim(), 3, 0.5, rng), 1.0);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Section2Params {
  int base_points1 = 64;
  int base_points2 = 32;
  double dt = 1e-4;
  double t_end = 0.1;
  double amplitude = 0.3;
  Scheme scheme = Scheme::ImexEuler;
  int record_every = 10;
  // q = 1 (Agmon) in 1D and q = 2 in 2D, both with r = 2
  Exponent q1 = Exponent(1);
  Exponent q2 = Exponent(2);
  Exponent r = Exponent(2);
};

Exponent read_exponent(Params& p, const std::string& key, const std::string& fallback) {
  const std::string text = p.get_string(key, fallback);
  try {
    return Exponent::parse(text);
  } catch (const std::exception& e) {
    p.fail(key, e.what());
  }
}

Section2Params read_common(Params& p) {
  Section2Params s;
  s.base_points1 = p.get_int("points_1d", s.base_points1);
  s.base_points2 = p.get_int("points_2d", s.base_points2);
  s.dt = p.get_double("dt", s.dt);
  s.t_end = p.get_double("t_end", s.t_end);
  s.amplitude = p.get_double("amplitude", s.amplitude);
  s.scheme = parse_scheme(p.get_string("scheme", "imex_euler"));
  s.record_every = p.get_int("record_every", s.record_every);
  s.q1 = read_exponent(p, "q_1d", "1");
  s.q2 = read_exponent(p, "q_2d", "2");
  s.r = read_exponent(p, "r", "2");
  for (int dim : {1, 2}) {
    const auto adm = check_divb_admissible({dim, dim == 1 ? s.q1 : s.q2, s.r});
    if (!adm.admissible) p.fail(dim == 1 ? "q_1d" : "q_2d", adm.diagnostic);
  }
  return s;
}

DriftSpec section2_drift(const Section2Params& s, int dim, int base_points, double margin, std::uint64_t seed) {
  const Grid base(dim, base_points);
  LrLqOptions opts;
  opts.amplitude = s.amplitude;
  return make_LrLq_drift(base, dim == 1 ? s.q1 : s.q2, s.r, margin, seed, opts);
}

SolverConfig solver_for(const Section2Params& s, const SuiteContext& ctx) {
  SolverConfig cfg;
  cfg.epsilon = 1.0;
  cfg.dt = refined_step(s.dt, ctx);
  cfg.t_end = s.t_end;
  cfg.scheme = s.scheme;
  cfg.record_every = ctx.refined ? 2 * s.record_every : s.record_every;
  return cfg;
}

int base_points(const Section2Params& s, int dim) { return dim == 1 ? s.base_points1 : s.base_points2; }

}  // namespace

SuiteResult suite_stability(Params& p, const SuiteContext& ctx) {
  const Section2Params s = read_common(p);
  const int drifts = p.get_int("drifts", 20);
  const std::vector<int> dims = p.get_ints("dims", {1, 2});
  const std::vector<double> margins = p.get_doubles("margins", {0.5, 0.2, 0.05});
  const double perturbation = p.get_double("perturbation", 1e-3);
  p.finish();
  if (dims.empty() || margins.empty()) p.fail("dims", "dims and margins must be nonempty");
  if (ctx.validate_only) return {};

  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  for (int i = 0; i < drifts; ++i) {
    const int dim = dims[i % dims.size()];
    const double margin = margins[(i / dims.size()) % margins.size()];
    const std::uint64_t seed = derive_seed(ctx.seed, kStabilityStream, i);
    const std::string id = "drift " + std::to_string(i) + " dim=" + std::to_string(dim) +
                           " margin=" + format_number(margin);
    jobs.emplace_back(id, [=] {
      const DriftSpec drift = section2_drift(s, dim, base_points(s, dim), margin, seed);
      const Grid grid(dim, refined_points(base_points(s, dim), ctx));
      const SolverConfig cfg = solver_for(s, ctx);
      const ScalarField rho0 = positive_density(grid, seed ^ 0x5eedULL);
      const Trajectory rho = solve_fokker_planck(drift_fn(drift, grid), rho0, cfg);

      RunRecord run;
      run.config = {{"dim", dim}, {"points", grid.points_per_axis()}, {"margin", margin},
                    {"seed", seed}, {"solver", solver_json(cfg)}};
      run.drift = drift_json(drift);
      run.reports = check_thm_stability(rho, drift, 1.0);
      run.series.push_back({"L2", spatial_norm_series(rho, 2.0)});
      run.series.push_back({"divb_q", divergence_norm_series(drift, rho.times())});
      run.trajectories.emplace_back("rho", thin(rho));
      run.metrics["mass_deviation"] = max_mass_deviation(rho);
      run.metrics["margin"] = margin;
      run.metrics["dim"] = dim;
      return run;
    });
  }
  // Uniqueness: the difference of two runs from nearby data obeys the same bound.
  for (int dim : dims) {
    const double margin = margins.back();
    const std::uint64_t seed = derive_seed(ctx.seed, kStabilityStream, 1000 + dim);
    const std::string id = "uniqueness dim=" + std::to_string(dim) + " margin=" + format_number(margin);
    jobs.emplace_back(id, [=] {
      const DriftSpec drift = section2_drift(s, dim, base_points(s, dim), margin, seed);
      const Grid grid(dim, refined_points(base_points(s, dim), ctx));
      const SolverConfig cfg = solver_for(s, ctx);
      const ScalarField rho0 = positive_density(grid, seed ^ 0x5eedULL);
      std::mt19937_64 rng(seed ^ 0xd1ffULL);
      const ScalarField bump = sample_profile(grid, bounded_profile(dim, 2, perturbation, rng));
      const DriftFn b = drift_fn(drift, grid);
      const Trajectory first = solve_fokker_planck(b, rho0, cfg);
      const Trajectory second = solve_fokker_planck(b, rho0 + bump, cfg);
      Trajectory diff(grid);
      for (std::size_t k = 0; k < first.size(); ++k) diff.push_back(first.time(k), second.field(k) - first.field(k));

      RunRecord run;
      run.config = {{"dim", dim}, {"points", grid.points_per_axis()}, {"margin", margin}, {"seed", seed},
                    {"perturbation", perturbation}, {"solver", solver_json(cfg)}};
      run.drift = drift_json(drift);
      run.reports = check_thm_stability(diff, drift, 1.0);
      for (auto& r : run.reports) r.label = "uniqueness " + r.label;
      run.series.push_back({"difference_L2", spatial_norm_series(diff, 2.0)});
      run.trajectories.emplace_back("difference", thin(diff));
      run.metrics["mass_deviation"] = std::max(max_mass_deviation(first), max_mass_deviation(second));
      run.metrics["margin"] = margin;
      run.metrics["dim"] = dim;
      return run;
    });
  }

  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);
  out.metrics["max_mass_deviation"] = max_run_metric(out, "mass_deviation");
  std::map<std::string, std::vector<double>> slacks;
  for (const auto& run : out.runs) {
    if (!run.error.empty() || run.id.rfind("drift", 0) != 0) continue;
    const std::string key = "dim=" + format_number(run.metrics.at("dim")) + " margin=" +
                            format_number(run.metrics.at("margin"));
    for (const auto& r : run.reports) {
      slacks["median_slack " + r.label + " " + key].push_back(r.slack);
      slacks["median_relative_slack " + r.label + " " + key].push_back(r.rhs > 0.0 ? r.slack / r.rhs : 0.0);
    }
  }
  for (const auto& [name, values] : slacks) out.metrics[name] = median(values);
  for (const auto& run : out.runs) {
    for (const auto& r : run.reports) {
      expect(out, r.passed() && r.slack >= 0.0, run.id + " " + r.label + " has negative slack");
    }
  }
  return out;
}

SuiteResult suite_main2_dual(Params& p, const SuiteContext& ctx) {
  const Section2Params s = read_common(p);
  const int seeds = p.get_int("seeds", 10);
  const std::vector<int> dims = p.get_ints("dims", {1, 2});
  const double margin = p.get_double("margin", 0.2);
  const std::vector<double> exponents = p.get_doubles("exponents", {2, 4, 8});
  const std::vector<double> dual_exponents = p.get_doubles("dual_exponents", {2, 4, 8, 4.0 / 3.0, 8.0 / 7.0});
  const double l1_tol = p.get_double("l1_tolerance", 1e-12);
  p.finish();
  if (dims.empty()) p.fail("dims", "dims must be nonempty");
  if (ctx.validate_only) return {};

  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  for (int i = 0; i < seeds; ++i) {
    const int dim = dims[i % dims.size()];
    const std::uint64_t seed = derive_seed(ctx.seed, kMain2Stream, i);
    jobs.emplace_back("seed " + std::to_string(i) + " dim=" + std::to_string(dim), [=] {
      const DriftSpec drift = section2_drift(s, dim, base_points(s, dim), margin, seed);
      const Grid grid(dim, refined_points(base_points(s, dim), ctx));
      const SolverConfig cfg = solver_for(s, ctx);
      const DriftFn b = drift_fn(drift, grid);
      const Trajectory rho = solve_fokker_planck(b, positive_density(grid, seed ^ 0x5eedULL), cfg);

      std::mt19937_64 rng(seed ^ 0xd0a1ULL);
      const ScalarField v_end = sample_profile(grid, bounded_profile(dim, 3, 1.0, rng));
      const ScalarField source = sample_profile(grid, bounded_profile(dim, 2, 0.5, rng));
      const Trajectory v = solve_transport_backward(b, v_end, constant_source(source), cfg);

      RunRecord run;
      run.config = {{"dim", dim}, {"points", grid.points_per_axis()}, {"margin", margin}, {"seed", seed},
                    {"solver", solver_json(cfg)}};
      run.drift = drift_json(drift);
      for (double q : exponents) {
        auto r = check_thm_main2(rho, drift, 1.0, q);
        r.label = "p=" + format_number(q);
        run.reports.push_back(r);
      }
      for (double q : dual_exponents) {
        auto r = check_cor_dual(v, source, drift, 1.0, q);
        r.label = "dual p=" + format_number(q);
        run.reports.push_back(r);
      }
      const TimeSeries l1 = spatial_norm_series(rho, 1.0);
      double drift_l1 = 0.0;
      for (double m : l1.values) drift_l1 = std::max(drift_l1, std::abs(m - l1.values.front()));
      run.series.push_back({"L1", l1});
      for (double q : exponents) run.series.push_back({"L" + format_number(q), spatial_norm_series(rho, q)});
      run.trajectories.emplace_back("rho", thin(rho));
      run.trajectories.emplace_back("v", thin(v));
      run.metrics["l1_deviation"] = drift_l1;
      run.metrics["mass_deviation"] = max_mass_deviation(rho);
      run.metrics["min_rho"] = [&] {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& f : rho.fields()) m = std::min(m, f.min());
        return m;
      }();
      return run;
    });
  }
  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);
  const double l1 = max_run_metric(out, "l1_deviation");
  out.metrics["max_l1_deviation"] = l1;
  out.metrics["max_mass_deviation"] = max_run_metric(out, "mass_deviation");
  expect(out, l1 <= l1_tol, "L1 norm of rho varies by " + format_number(l1));
  return out;
}

}  // namespace fplab::detail
