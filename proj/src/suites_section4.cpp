// Continuous dependence for viscous Hamilton-Jacobi pairs through the adjoint problem.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fplab/adjoint_pair.hpp"
#include "fplab/checks_section4.hpp"
#include "suite_common.hpp"

namespace fplab::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kPairStream = 5;

/// Terminal data and optional constant source, kept analytic so any grid can sample them.
struct PairSpec {
  std::string name;
  std::function<double(const Point&)> g1;
  std::function<double(const Point&)> g2;
  std::function<double(const Point&)> f1;  // empty means zero
  bool manufactured = false;               // sourceless, so Cole-Hopf gives both solutions
};

HjData hj_data(const Grid& grid, const std::function<double(const Point&)>& g,
               const std::function<double(const Point&)>& f) {
  HjData d{ScalarField::sample(grid, g), {}};
  if (f) d.source = constant_source(ScalarField::sample(grid, f));
  return d;
}

PairSpec manufactured_pair(double scale = 1.0) {
  PairSpec s;
  s.name = "cole_hopf";
  s.g1 = [](const Point& x) { return 0.04 * std::cos(kTwoPi * x[0]); };
  s.g2 = [scale](const Point& x) {
    const double g1 = 0.04 * std::cos(kTwoPi * x[0]);
    const double g2 = 0.03 * std::sin(kTwoPi * x[0]) + 0.01 * std::cos(2.0 * kTwoPi * x[0]);
    return g1 + scale * (g2 - g1);
  };
  s.manufactured = true;
  return s;
}

PairSpec sourced_pair() {
  PairSpec s = manufactured_pair();
  s.name = "sourced";
  s.f1 = [](const Point& x) { return 0.06 * std::sin(kTwoPi * x[0]); };
  s.manufactured = false;
  return s;
}

/// Sup-bounded random data; odd indices also carry a source on the first solution.
PairSpec random_pair(std::uint64_t seed, int index, double amplitude) {
  std::mt19937_64 rng(seed);
  const TrigProfile a = bounded_profile(1, 2, amplitude, rng);
  const TrigProfile b = bounded_profile(1, 2, amplitude, rng);
  const TrigProfile f = bounded_profile(1, 1, amplitude, rng);
  PairSpec s;
  s.name = "random " + std::to_string(index);
  s.g1 = [a](const Point& x) { return a.value(x); };
  s.g2 = [b](const Point& x) { return b.value(x); };
  if (index % 2 == 1) s.f1 = [f](const Point& x) { return f.value(x); };
  return s;
}

struct PairRun {
  Grid grid;
  HjData first;
  HjData second;
  AdjointPairConfig cfg;
};

PairRun prepare(const PairSpec& spec, int points, double dt, double t_end, double eps) {
  const Grid grid(1, points);
  PairRun r{grid, hj_data(grid, spec.g1, spec.f1), hj_data(grid, spec.g2, {}), {}};
  r.cfg.solver.epsilon = eps;
  r.cfg.solver.dt = dt;
  r.cfg.solver.t_end = t_end;
  return r;
}

ScalarField dual_density(const Grid& grid) {
  return ScalarField::sample(grid, [](const Point& x) { return 1.0 + 0.5 * std::cos(kTwoPi * x[0]); });
}

nlohmann::json pair_config(const PairSpec& spec, const PairRun& r) {
  return {{"pair", spec.name}, {"points", r.grid.points_per_axis()}, {"sourced", static_cast<bool>(spec.f1)},
          {"solver", solver_json(r.cfg.solver)}};
}

struct PairGrid {
  int points = 64;
  double dt = 1e-3;
  double t_end = 1.0;
  std::vector<double> epsilons{0.01, 0.1, 1.0};
};

PairGrid read_pair_grid(Params& p, const SuiteContext& ctx) {
  PairGrid g;
  g.points = refined_points(p.get_int("points", g.points), ctx);
  g.dt = refined_step(p.get_double("dt", g.dt), ctx);
  g.t_end = p.get_double("t_end", g.t_end);
  g.epsilons = p.get_doubles("epsilons", g.epsilons);
  return g;
}

/// Largest gap between the numerical and Cole-Hopf values of sup_x |w(t)|.
double manufactured_lhs_error(const AdjointPairResult& res, const PairRun& r, double eps, double t_end) {
  const Trajectory& w = res.w;
  const std::size_t stride = std::max<std::size_t>(1, w.size() / 20);
  double worst = 0.0;
  for (std::size_t k = 0; k < w.size(); k += stride) {
    const double s = t_end - w.time(k);
    const auto u1 = cole_hopf_solution(r.first.terminal, eps, s);
    const auto u2 = cole_hopf_solution(r.second.terminal, eps, s);
    double exact = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i) exact = std::max(exact, std::abs(u1[i] - u2[i]));
    worst = std::max(worst, std::abs(exact - lp_norm(w.field(k), kInf)));
  }
  return worst;
}

/// max over pairs of the spread of a per-run metric across epsilon.
double spread_across_eps(const SuiteResult& out, const std::string& metric) {
  std::map<std::string, std::pair<double, double>> range;
  for (const auto& run : out.runs) {
    const auto it = run.metrics.find(metric);
    if (!run.error.empty() || it == run.metrics.end()) continue;
    const std::string pair = run.config.value("pair", std::string());
    auto [pos, fresh] = range.try_emplace(pair, it->second, it->second);
    pos->second.first = std::min(pos->second.first, it->second);
    pos->second.second = std::max(pos->second.second, it->second);
  }
  double spread = 0.0;
  for (const auto& [name, lh] : range) spread = std::max(spread, lh.second - lh.first);
  return spread;
}

}  // namespace

SuiteResult suite_hjlip(Params& p, const SuiteContext& ctx) {
  const PairGrid pg = read_pair_grid(p, ctx);
  const int random_pairs = p.get_int("random_pairs", 10);
  const double amplitude = p.get_double("amplitude", 0.03);
  const double semiconcave_c1 = p.get_double("semiconcave_c1", 0.0);
  const double semiconcave_c2 = p.get_double("semiconcave_c2", 8.0);
  const std::vector<double> exponents = p.get_doubles("exponents", {2, 4});
  const std::vector<double> scalings = p.get_doubles("perturbation_scalings", {0.25, 0.5, 1.0});
  const double scaling_eps = p.get_double("scaling_epsilon", 0.1);
  const double defect_tol = p.get_double("duality_tolerance", 1e-5);
  const double ibp_tol = p.get_double("ibp_tolerance", 1e-10);
  p.finish();
  if (ctx.validate_only) return {};

  std::vector<PairSpec> pairs{manufactured_pair(), sourced_pair()};
  for (int i = 0; i < random_pairs; ++i) pairs.push_back(random_pair(derive_seed(ctx.seed, kPairStream, i), i, amplitude));

  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  for (const auto& spec : pairs) {
    for (double eps : pg.epsilons) {
      jobs.emplace_back(spec.name + " eps=" + format_number(eps), [=] {
        const Hamiltonian h = Hamiltonian::quadratic();
        PairRun r = prepare(spec, pg.points, pg.dt, pg.t_end, eps);
        const AdjointPairResult res = solve_adjoint_pair(h, r.first, r.second, dual_density(r.grid), r.cfg);

        RunRecord run;
        run.config = pair_config(spec, r);
        run.config["epsilon"] = eps;
        const EstimateReport hjlip = check_thm_hjlip(res, r.first, r.second);
        run.reports.push_back(hjlip);
        auto semi = check_thm_semiconcave(res, r.first, r.second, h, {semiconcave_c1, semiconcave_c2});
        run.reports.push_back(semi);
        const GradientResult grad = check_cor_gradient(res, r.first, r.second);
        run.reports.push_back(grad.literal);
        run.reports.push_back(grad.sup_time);
        run.reports.push_back(grad.pointwise);
        for (double q : exponents) {
          run.reports.push_back(check_thm_ii_and_iii(res, r.first, r.second, h, eps, DualityMode::DivLrLq, q));
          run.reports.push_back(check_thm_ii_and_iii(res, r.first, r.second, h, eps, DualityMode::AronsonSerrin, q));
        }
        run.series.push_back({"pairing", res.pairing});
        run.series.push_back({"dual_mass", res.mass});
        run.series.push_back({"max_minus_divergence", res.max_minus_divergence});
        run.series.push_back({"w_sup", spatial_norm_series(res.w, kInf)});
        run.trajectories.emplace_back("w", thin(res.w));
        run.trajectories.emplace_back("rho", thin(res.rho));
        run.metrics["duality_defect_relative"] = hjlip.constant("duality_defect_relative");
        run.metrics["mass_deviation"] = max_mass_deviation(res.rho);
        run.metrics["ibp_defect"] = grad.ibp_defect;
        run.metrics["hjlip_rhs"] = hjlip.rhs;
        if (spec.manufactured) run.metrics["cole_hopf_lhs_error"] = manufactured_lhs_error(res, r, eps, pg.t_end);
        return run;
      });
    }
  }
  for (double s : scalings) {
    const PairSpec spec = manufactured_pair(s);
    jobs.emplace_back("scaling s=" + format_number(s), [=] {
      PairRun r = prepare(spec, pg.points, pg.dt, pg.t_end, scaling_eps);
      const AdjointPairResult res =
          solve_adjoint_pair(Hamiltonian::quadratic(), r.first, r.second, dual_density(r.grid), r.cfg);
      RunRecord run;
      run.config = pair_config(spec, r);
      run.config["pair"] = "scaling";
      run.config["scale"] = s;
      EstimateReport rep = check_thm_hjlip(res, r.first, r.second);
      rep.label = "scaling s=" + format_number(s);
      run.reports.push_back(rep);
      run.metrics["lhs_over_scale"] = rep.lhs / s;
      run.metrics["mass_deviation"] = max_mass_deviation(res.rho);
      return run;
    });
  }

  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);
  const double defect = max_run_metric(out, "duality_defect_relative");
  const double ibp = max_run_metric(out, "ibp_defect");
  const double rhs_spread = spread_across_eps(out, "hjlip_rhs");
  out.metrics["max_duality_defect_relative"] = defect;
  out.metrics["max_ibp_defect"] = ibp;
  out.metrics["hjlip_rhs_spread_across_eps"] = rhs_spread;
  out.metrics["max_cole_hopf_lhs_error"] = max_run_metric(out, "cole_hopf_lhs_error");
  out.metrics["max_mass_deviation"] = max_run_metric(out, "mass_deviation");
  double lo = kInf;
  double hi = 0.0;
  for (const auto& run : out.runs) {
    const auto it = run.metrics.find("lhs_over_scale");
    if (it == run.metrics.end()) continue;
    lo = std::min(lo, it->second);
    hi = std::max(hi, it->second);
  }
  if (hi > 0.0) out.metrics["perturbation_scaling_relative_spread"] = (hi - lo) / hi;
  expect(out, defect <= defect_tol, "duality defect " + format_number(defect) + " exceeds " + format_number(defect_tol));
  expect(out, ibp <= ibp_tol, "integration-by-parts defect " + format_number(ibp));
  expect(out, rhs_spread == 0.0, "continuous dependence RHS differs across epsilon");
  return out;
}

SuiteResult suite_superquadratic(Params& p, const SuiteContext& ctx) {
  const PairGrid pg = read_pair_grid(p, ctx);
  const std::vector<double> gammas = p.get_doubles("gammas", {1.5, 2.0, 3.0});
  const double bound = p.get_double("laplacian_bound", 6.0);
  const double well_depth = p.get_double("control_depth", 0.05);
  const double well_width = p.get_double("control_width", 0.05);
  p.finish();
  if (ctx.validate_only) return {};

  PairSpec control;
  control.name = "control";
  control.g1 = [=](const Point& x) {
    const double d = x[0] - 0.5;
    return -well_depth * std::exp(-d * d / (2.0 * well_width * well_width));
  };
  control.g2 = manufactured_pair().g2;
  const std::vector<PairSpec> pairs{manufactured_pair(), sourced_pair(), control};

  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  for (double gamma : gammas) {
    for (const auto& spec : pairs) {
      for (double eps : pg.epsilons) {
        if (spec.name == "control" && eps != pg.epsilons.front()) continue;
        jobs.emplace_back("gamma=" + format_number(gamma) + " " + spec.name + " eps=" + format_number(eps), [=] {
          const Hamiltonian h = Hamiltonian::power(gamma);
          PairRun r = prepare(spec, pg.points, pg.dt, pg.t_end, eps);
          const AdjointPairResult res = solve_adjoint_pair(h, r.first, r.second, dual_density(r.grid), r.cfg);
          RunRecord run;
          run.config = pair_config(spec, r);
          run.config["epsilon"] = eps;
          run.config["gamma"] = gamma;
          EstimateReport rep = check_thm_superquadratic(res, r.first, r.second, h, bound);
          rep.label = "gamma=" + format_number(gamma) + " " + spec.name;
          run.reports.push_back(rep);
          run.series.push_back({"max_minus_divergence", res.max_minus_divergence});
          run.metrics["K"] = rep.constant("K");
          run.metrics["max_minus_divergence"] = rep.constant("max_minus_divergence");
          run.metrics["control"] = spec.name == "control";
          run.negative_control = spec.name == "control";
          run.metrics["mass_deviation"] = max_mass_deviation(res.rho);
          return run;
        });
      }
    }
  }
  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);
  out.metrics["max_mass_deviation"] = max_run_metric(out, "mass_deviation");
  for (const auto& run : out.runs) {
    if (!run.error.empty()) continue;
    const auto& rep = run.reports.front();
    if (run.metrics.at("control") != 0.0) {
      expect(out, rep.status == ReportStatus::HypothesisFailed,
             run.id + " negative control not routed to hypothesis failure");
    } else {
      expect(out, rep.passed(), run.id + " " + to_string(rep.status));
      expect(out, run.metrics.at("max_minus_divergence") <= run.metrics.at("K"), run.id + " -div b exceeds K");
    }
  }
  return out;
}

SuiteResult suite_l1(Params& p, const SuiteContext& ctx) {
  const PairGrid pg = read_pair_grid(p, ctx);
  const double relative_delta = p.get_double("relative_delta", 1e-3);
  const double error_fraction = p.get_double("error_fraction", 0.01);
  const std::vector<double> ratio_range = p.get_doubles("ratio_range", {1.5, 2.5});
  p.finish();
  if (ratio_range.size() != 2) p.fail("ratio_range", "expects two numbers");
  if (ctx.validate_only) return {};

  const std::vector<PairSpec> pairs{manufactured_pair(), sourced_pair()};
  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  for (const auto& spec : pairs) {
    for (double eps : pg.epsilons) {
      jobs.emplace_back(spec.name + " eps=" + format_number(eps), [=] {
        const Hamiltonian h = Hamiltonian::quadratic();
        PairRun r = prepare(spec, pg.points, pg.dt, pg.t_end, eps);
        RunRecord run;
        run.config = pair_config(spec, r);
        run.config["epsilon"] = eps;
        run.config["relative_delta"] = relative_delta;
        std::vector<double> gaps;
        for (double scale : {1.0, 0.5}) {
          double delta = 0.0;
          const DualDatumFn datum = [&](const ScalarField& w) {
            delta = scale * relative_delta * lp_norm(w, kInf);
            return smoothed_sign(w, delta);
          };
          const AdjointPairResult res = solve_adjoint_pair(h, r.first, r.second, datum, r.cfg);
          L1Result l1 = check_thm_L1(res, r.first, r.second, delta);
          const std::string tag = scale == 1.0 ? "delta" : "delta/2";
          l1.main.label = tag;
          l1.dual_bound.label = "dual " + tag;
          run.reports.push_back(l1.main);
          run.reports.push_back(l1.dual_bound);
          run.metrics["delta_error_over_lhs " + tag] = l1.delta_error / l1.main.lhs;
          run.metrics["measured_gap " + tag] = l1.measured_gap;
          run.metrics["mass_deviation"] = std::max(run.metrics["mass_deviation"], max_mass_deviation(res.rho));
          gaps.push_back(l1.measured_gap);
        }
        run.metrics["gap_ratio"] = gaps[0] / gaps[1];
        return run;
      });
    }
  }
  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);
  double worst_fraction = 0.0;
  double ratio_lo = kInf;
  double ratio_hi = 0.0;
  for (const auto& run : out.runs) {
    if (!run.error.empty()) continue;
    for (const auto& [name, v] : run.metrics) {
      if (name.rfind("delta_error_over_lhs", 0) == 0) worst_fraction = std::max(worst_fraction, v);
    }
    const double ratio = run.metrics.at("gap_ratio");
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
    expect(out, ratio >= ratio_range[0] && ratio <= ratio_range[1],
           run.id + " smoothing gap ratio " + format_number(ratio) + " outside [" + format_number(ratio_range[0]) +
               ", " + format_number(ratio_range[1]) + "]");
  }
  out.metrics["max_delta_error_over_lhs"] = worst_fraction;
  out.metrics["min_gap_ratio"] = ratio_lo;
  out.metrics["max_gap_ratio"] = ratio_hi;
  out.metrics["max_mass_deviation"] = max_run_metric(out, "mass_deviation");
  expect(out, worst_fraction < error_fraction, "delta error reaches " + format_number(worst_fraction) + " of the LHS");
  return out;
}

}  // namespace fplab::detail
