// One-sided divergence bound: sup-norm contraction uniformly in epsilon.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fplab/checks_section3.hpp"
#include "suite_common.hpp"

namespace fplab::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField wave(const Grid& grid, double a1, double k1, double a2, double k2, bool sine_first) {
  return ScalarField::sample(grid, [=](const Point& x) {
    const double first = sine_first ? std::sin(kTwoPi * k1 * x[0]) : std::cos(kTwoPi * k1 * x[0]);
    return a1 * first + a2 * std::cos(kTwoPi * k2 * x[0]);
  });
}

}  // namespace

SuiteResult suite_one_sided(Params& p, const SuiteContext& ctx) {
  const int base_n = p.get_int("points", 1024);
  const double sigma = p.get_double("sigma", 1e-4);
  const double t_end = p.get_double("t_end", 1.0);
  const std::vector<double> c1s = p.get_doubles("c1", {0.5, 1.0, 2.0});
  const double c2 = p.get_double("c2", 0.5);
  const std::vector<double> epsilons = p.get_doubles("epsilons", {0.0, 0.01, 0.1, 1.0});
  const int sharpness = p.get_int("sharpness", 16);
  const int min_steps = p.get_int("min_steps", 400);
  const double cfl = p.get_double("cfl", 0.4);
  const double perturbation = p.get_double("perturbation", 1e-3);
  const Scheme scheme = parse_scheme(p.get_string("scheme", "imex_ssp3"));
  const std::vector<double> chain = p.get_doubles("chain_p", {4.0, 16.0});
  p.finish();
  if (ctx.validate_only) return {};

  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  for (std::size_t ci = 0; ci < c1s.size(); ++ci) {
    const double c1 = c1s[ci];
    const std::uint64_t seed = derive_seed(ctx.seed, 4, ci);
    for (double eps : epsilons) {
      jobs.emplace_back("c1=" + format_number(c1) + " eps=" + format_number(eps), [=] {
        OneSidedOptions opts;
        opts.sharpness = sharpness;
        const DriftSpec drift = make_one_sided_singular_drift(Grid(1, base_n), c1, c2, seed, opts);
        const Grid grid(1, refined_points(base_n, ctx));
        const SampledDrift sampled(drift, grid);
        // t * max|b(t)| is largest at one of the endpoints for this family.
        const double reach = std::max(sigma * sampled.max_speed(sigma), t_end * sampled.max_speed(t_end));
        const int steps = ctx.refined ? 2 * min_steps : min_steps;

        SolverConfig cfg;
        cfg.epsilon = eps;
        cfg.mesh = TimeMeshKind::Geometric;
        cfg.t_start = sigma;
        cfg.t_end = t_end;
        cfg.geometric_ratio = std::min(std::pow(t_end / sigma, 1.0 / steps), 1.0 + cfl * grid.spacing() / reach);
        cfg.scheme = scheme;

        const ScalarField g1 = wave(grid, 0.3, 1, 0.1, 2, true);
        const ScalarField g2 = wave(grid, 0.2, 3, 0.1, 2, true);
        const ScalarField g3 = g1 + wave(grid, perturbation, 1, 0.0, 1, false);
        const ScalarField f = wave(grid, 0.0, 1, 0.2, 1, true);
        const ScalarField f2 = wave(grid, 0.1, 1, 0.0, 1, true);
        const DriftFn b = drift_fn(drift, grid);
        const Trajectory u1 = solve_transport(b, g1, constant_source(f), cfg);
        const Trajectory u2 = solve_transport(b, g2, constant_source(f), cfg);
        const Trajectory u3 = solve_transport(b, g2, constant_source(f2), cfg);
        const Trajectory u4 = solve_transport(b, g3, constant_source(f), cfg);

        RunRecord run;
        run.config = {{"c1", c1}, {"c2", c2}, {"epsilon", eps}, {"points", grid.points_per_axis()},
                      {"sigma", sigma}, {"steps", u1.size() - 1}, {"solver", solver_json(cfg)}};
        run.drift = drift_json(drift);

        const OneSidedResult contraction = check_thm_one_sided(u1, u2, {c1, c2, f, f}, chain);
        run.reports.push_back(contraction.main);
        for (const auto& r : contraction.p_chain) run.reports.push_back(r);
        OneSidedResult distinct = check_thm_one_sided(u1, u3, {c1, c2, f, f2}, chain);
        run.reports.push_back(distinct.main);
        OneSidedResult unique = check_thm_one_sided(u1, u4, {c1, c2, f, f}, chain);
        unique.main.label = "uniqueness";
        run.reports.push_back(unique.main);

        for (std::size_t k = 0; k < contraction.p_values.size(); ++k) {
          run.metrics["norm p=" + format_number(contraction.p_values[k])] = contraction.p_norms[k];
        }
        run.metrics["norm p=inf"] = contraction.p_norms.back();
        run.metrics["p_sequence_ok"] = contraction.p_sequence_ok && distinct.p_sequence_ok && unique.p_sequence_ok;
        run.metrics["contraction_rhs"] = contraction.main.rhs;
        run.metrics["c1"] = c1;
        run.metrics["epsilon"] = eps;

        Trajectory w(grid);
        for (std::size_t k = 0; k < u1.size(); ++k) w.push_back(u1.time(k), u1.field(k) - u2.field(k));
        run.series.push_back({"w_sup", spatial_norm_series(w, std::numeric_limits<double>::infinity())});
        run.trajectories.emplace_back("w", thin(w));
        return run;
      });
    }
  }
  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);

  double spread = 0.0;
  bool sequence_ok = true;
  for (double c1 : c1s) {
    std::vector<double> rhs;
    for (const auto& run : out.runs) {
      if (!run.error.empty() || run.metrics.at("c1") != c1) continue;
      rhs.push_back(run.metrics.at("contraction_rhs"));
      sequence_ok = sequence_ok && run.metrics.at("p_sequence_ok") != 0.0;
    }
    const auto [lo, hi] = std::minmax_element(rhs.begin(), rhs.end());
    if (lo != rhs.end()) spread = std::max(spread, *hi - *lo);
  }
  out.metrics["rhs_spread_across_eps"] = spread;
  out.metrics["p_sequence_ok"] = sequence_ok;
  expect(out, spread == 0.0, "contraction RHS differs across epsilon by " + format_number(spread));
  expect(out, sequence_ok, "p-norm sequence not monotone or above the sup norm");
  return out;
}

}  // namespace fplab::detail
