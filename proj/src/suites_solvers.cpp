// Solver validation against closed-form and independently transformed solutions.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fplab/hamiltonian.hpp"
#include "suite_common.hpp"

namespace fplab::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::vector<double> heat_by_direct_dft(const std::vector<double>& data, double eps, double s) {
  const int n = static_cast<int>(data.size());
  std::vector<double> out(data.size(), 0.0);
  for (int k = -n / 2; k < n / 2; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (int j = 0; j < n; ++j) {
      re += data[j] * std::cos(kTwoPi * k * j / n);
      im -= data[j] * std::sin(kTwoPi * k * j / n);
    }
    const double decay = std::exp(-eps * kTwoPi * kTwoPi * k * k * s) / n;
    for (int j = 0; j < n; ++j) {
      out[j] += decay * (re * std::cos(kTwoPi * k * j / n) - im * std::sin(kTwoPi * k * j / n));
    }
  }
  return out;
}

std::vector<double> cole_hopf_solution(const ScalarField& g, double eps, double s) {
  std::vector<double> phi(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) phi[i] = std::exp(-g[i] / (2.0 * eps));
  phi = heat_by_direct_dft(phi, eps, s);
  for (double& v : phi) v = -2.0 * eps * std::log(v);
  return phi;
}

SuiteResult suite_heat_kernel(Params& p, const SuiteContext& ctx) {
  const int n = refined_points(p.get_int("points", 64), ctx);
  const double dt = refined_step(p.get_double("dt", 1e-4), ctx);
  const double t_end = p.get_double("t_end", 0.1);
  const double eps = p.get_double("epsilon", 1.0);
  const double tol = p.get_double("tolerance", 1e-4);
  const std::vector<int> dims = p.get_ints("dims", {1});
  const Scheme scheme = parse_scheme(p.get_string("scheme", "imex_midpoint"));
  const int record_every = p.get_int("record_every", 50);
  p.finish();
  if (ctx.validate_only) return {};

  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  for (int dim : dims) {
    jobs.emplace_back("heat dim=" + std::to_string(dim), [=] {
      const Grid grid(dim, n);
      const double rate = eps * kTwoPi * kTwoPi * dim;
      auto exact = [&](double t) {
        return ScalarField::sample(grid, [&](const Point& x) {
          double m = std::cos(kTwoPi * x[0]);
          if (dim == 2) m *= std::cos(kTwoPi * x[1]);
          return 1.0 + std::exp(-rate * t) * m;
        });
      };
      SolverConfig cfg;
      cfg.epsilon = eps;
      cfg.dt = dt;
      cfg.t_end = t_end;
      cfg.scheme = scheme;
      cfg.record_every = record_every;
      const Trajectory traj = solve_fokker_planck(zero_drift(grid), exact(0.0), cfg);

      TimeSeries err;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        err.times.push_back(traj.time(i));
        err.values.push_back(lp_norm(traj.field(i) - exact(traj.time(i)), 2.0));
      }
      RunRecord run;
      run.config = {{"dim", dim}, {"points", n}, {"solver", solver_json(cfg)}};
      run.series.push_back({"l2_error", err});
      run.series.push_back({"mass", spatial_norm_series(traj, 1.0)});
      run.trajectories.emplace_back("rho", thin(traj));
      run.metrics["l2_error"] = time_lr_norm(err, kInf);
      run.metrics["mass_deviation"] = max_mass_deviation(traj);
      return run;
    });
  }
  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);
  const double worst = max_run_metric(out, "l2_error");
  out.metrics["max_l2_error"] = worst;
  out.metrics["max_mass_deviation"] = max_run_metric(out, "mass_deviation");
  double slowest = 0.0;
  for (const auto& run : out.runs) slowest = std::max(slowest, run.seconds);
  out.timings["max_run_seconds"] = slowest;
  expect(out, worst <= tol, "heat kernel L2 error " + format_number(worst) + " exceeds " + format_number(tol));
  return out;
}

SuiteResult suite_cole_hopf(Params& p, const SuiteContext& ctx) {
  const int n = refined_points(p.get_int("points", 64), ctx);
  const double dt = refined_step(p.get_double("dt", 1e-3), ctx);
  const double t_end = p.get_double("t_end", 1.0);
  const std::vector<double> epsilons = p.get_doubles("epsilons", {0.05, 0.1});
  const double tol = p.get_double("tolerance", 1e-4);
  const Scheme scheme = parse_scheme(p.get_string("scheme", "imex_midpoint"));
  const int record_every = p.get_int("record_every", 50);
  p.finish();
  if (ctx.validate_only) return {};

  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  for (double eps : epsilons) {
    jobs.emplace_back("cole_hopf eps=" + format_number(eps), [=] {
      const Grid grid(1, n);
      const ScalarField g = ScalarField::sample(grid, [](const Point& x) {
        return 0.2 * std::cos(kTwoPi * x[0]) + 0.1 * std::sin(2.0 * kTwoPi * x[0]);
      });
      SolverConfig cfg;
      cfg.epsilon = eps;
      cfg.dt = dt;
      cfg.t_end = t_end;
      cfg.scheme = scheme;
      cfg.record_every = record_every;
      const Trajectory traj = solve_hamilton_jacobi(Hamiltonian::quadratic(), g, {}, cfg);

      TimeSeries err;
      for (std::size_t s = 0; s < traj.size(); ++s) {
        const auto exact = cole_hopf_solution(g, eps, t_end - traj.time(s));
        double diff = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          diff = std::max(diff, std::abs(traj.field(s)[i] - exact[i]));
          scale = std::max(scale, std::abs(exact[i]));
        }
        err.times.push_back(traj.time(s));
        err.values.push_back(diff / scale);
      }
      RunRecord run;
      run.config = {{"points", n}, {"solver", solver_json(cfg)}};
      run.series.push_back({"relative_linf_error", err});
      run.trajectories.emplace_back("u", thin(traj));
      run.metrics["relative_linf_error"] = time_lr_norm(err, kInf);
      return run;
    });
  }
  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);
  for (const auto& run : out.runs) {
    out.timings[run.id + " seconds"] = run.seconds;
    if (!run.error.empty()) continue;
    const double e = run.metrics.at("relative_linf_error");
    expect(out, e <= tol, run.id + " relative error " + format_number(e) + " exceeds " + format_number(tol));
  }
  out.metrics["max_relative_linf_error"] = max_run_metric(out, "relative_linf_error");
  return out;
}

}  // namespace fplab::detail
