// Non-uniqueness without a selection criterion: the Benton counterexample.

#include <string>

#include "fplab/benton.hpp"
#include "suite_common.hpp"

namespace fplab::detail {

SuiteResult suite_benton(Params& p, const SuiteContext& ctx) {
  const double time = p.get_double("time", 0.5);
  const std::vector<int> points = p.get_ints("points", {64, 128, 256, 512, 1024});
  const std::vector<double> slope_range = p.get_doubles("slope_range", {-1.1, -0.9});
  const double min_distance = p.get_double("min_distance", 0.4);
  p.finish();
  if (slope_range.size() != 2) p.fail("slope_range", "expects two numbers");
  if (ctx.validate_only) return {};

  std::vector<std::pair<std::string, std::function<RunRecord()>>> jobs;
  jobs.emplace_back("benton t=" + format_number(time), [=] {
    const BentonReport b = benton_demo(time, points);
    RunRecord run;
    run.config = {{"time", time}, {"points", points}, {"window", {-1.0, 1.0}}};
    // times hold the window spacing h
    run.series.push_back({"kink_laplacian_vs_spacing", {b.spacings, b.kink_laplacian, std::nullopt}});
    run.metrics["initial_distance"] = b.initial_distance;
    run.metrics["sup_distance"] = b.sup_distance;
    run.metrics["kink_slope"] = b.kink_slope;
    run.metrics["u1_laplacian"] = b.u1_laplacian;
    run.metrics["residual_u1"] = b.residual_u1;
    run.metrics["residual_u2"] = b.residual_u2;
    run.metrics["residual_u3"] = b.residual_u3;
    return run;
  });
  SuiteResult out;
  out.runs = run_jobs(jobs, ctx.threads);
  if (!out.runs.front().error.empty()) return out;
  const auto& m = out.runs.front().metrics;
  out.metrics = m;
  const double slope = m.at("kink_slope");
  expect(out, slope >= slope_range[0] && slope <= slope_range[1],
         "kink Laplacian slope " + format_number(slope) + " outside range");
  expect(out, m.at("sup_distance") >= min_distance, "sup distance " + format_number(m.at("sup_distance")));
  expect(out, m.at("initial_distance") <= 1e-12, "initial data differ");
  return out;
}

}  // namespace fplab::detail
