// lab: command-line front end for the verification suites.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fplab/benton.hpp"
#include "fplab/config.hpp"
#include "fplab/experiment.hpp"
#include "fplab/exponents.hpp"
#include "fplab/render.hpp"

namespace {

using namespace fplab;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;

  [[nodiscard]] ExperimentOptions options() const {
    ExperimentOptions o;
    o.seed = seed;
    o.threads = threads;
    if (out_dir) o.out_dir = *out_dir;
    return o;
  }
};

void print_summary(const ExperimentResult& res) {
  for (const auto& s : res.suites) {
    int passed = 0;
    int failed = 0;
    int hypothesis = 0;
    for (const auto* r : s.reports()) {
      if (r->status == ReportStatus::Passed) ++passed;
      if (r->status == ReportStatus::EstimateFailed) ++failed;
      if (r->status == ReportStatus::HypothesisFailed) ++hypothesis;
    }
    std::printf("%-16s %s  reports: %d passed, %d estimate failed, %d hypothesis failed\n", s.name.c_str(),
                s.passed() ? "PASS" : "FAIL", passed, failed, hypothesis);
    for (const auto& f : s.failures) std::printf("  - %s\n", f.c_str());
  }
  std::printf("results in %s\n", res.dir.string().c_str());
}

int cmd_exponents(int n, const std::string& q_text, const std::string& r_text) {
  const ExponentPair ep{n, Exponent::parse(q_text), Exponent::parse(r_text)};
  const Admissibility adm = check_divb_admissible(ep);
  std::printf("n = %d, q = %s, r = %s\n", n, ep.q.str().c_str(), ep.r.str().c_str());
  std::printf("n/(2q) + 1/r = %s\n", ep.criticality().str().c_str());
  std::printf("div b in L^r L^q: %s%s\n", adm.admissible ? "admissible" : "inadmissible",
              adm.admissible ? "" : (" (" + adm.diagnostic + ")").c_str());
  try {
    const GNExponents gn = gn_from_q(n, ep.q);
    std::printf("GN: theta = %s, q' = %s, 2q' = %s, derived r = %s\n", gn.theta.str().c_str(),
                gn.q_conj.str().c_str(), gn.q_conj.is_infinite() ? "inf" : (gn.q_conj.value() * Rational(2)).str().c_str(),
                gn.r_derived.str().c_str());
  } catch (const InadmissibleExponent& e) {
    std::printf("GN: %s\n", e.what());
  }
  return adm.admissible ? 0 : 3;
}

int cmd_benton(double time) {
  const BentonReport b = benton_demo(time);
  std::printf("t = %g\n", b.time);
  std::printf("initial distance    %g\n", b.initial_distance);
  std::printf("sup |u3 - u1|       %g\n", b.sup_distance);
  std::printf("residuals           %g %g %g\n", b.residual_u1, b.residual_u2, b.residual_u3);
  for (std::size_t i = 0; i < b.spacings.size(); ++i) {
    std::printf("h = %-10g max |D2 u3| = %g\n", b.spacings[i], b.kink_laplacian[i]);
  }
  std::printf("kink slope          %g\n", b.kink_slope);
  std::printf("%s\n", b.passed ? "PASS" : "FAIL");
  return b.passed ? 0 : 2;
}

int cmd_report(const std::string& dir) {
  const RenderResult r = render_report(dir);
  std::printf("wrote %s (%zu figures, %d matrix rows)\n", r.markdown.string().c_str(), r.figures.size(),
              r.matrix_rows);
  for (const auto& m : r.missing) std::printf("missing: %s\n", m.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification lab for Fokker-Planck and Hamilton-Jacobi estimates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Override the experiment seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Directory for experiment results");

  int n = 1;
  std::string q = "1";
  std::string r = "2";
  auto* exponents = app.add_subcommand("exponents", "Check an exponent pair for div b and its GN exponents");
  exponents->add_option("-n,--dim", n, "Space dimension");
  exponents->add_option("-q", q, "Spatial exponent (integer, a/b or inf)");
  exponents->add_option("-r", r, "Temporal exponent (integer, a/b or inf)");

  std::string cfg_path;
  auto* simulate = app.add_subcommand("simulate", "Run every suite and persist results; statuses do not set the exit code");
  simulate->add_option("config", cfg_path, "Experiment config")->required();
  auto* verify = app.add_subcommand("verify", "Run every suite and judge the estimates");
  verify->add_option("config", cfg_path, "Experiment config")->required();
  auto* sweep = app.add_subcommand("sweep", "verify, then render the report bundle");
  sweep->add_option("config", cfg_path, "Experiment config")->required();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Render Markdown and SVG from experiment directories");
  report->add_option("dir", report_dir, "Experiment directory or a directory of them")->required();

  double time = 0.5;
  auto* benton = app.add_subcommand("benton", "Benton non-uniqueness demo");
  benton->add_option("--time", time, "Evaluation time");

  for (auto* sub : {exponents, simulate, verify, sweep, report, benton}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*exponents) return cmd_exponents(n, q, r);
    if (*benton) return cmd_benton(time);
    if (*report) return cmd_report(report_dir);
    const ExperimentConfig cfg = load_config(cfg_path);
    const ExperimentResult res = run_experiment(cfg, g.options());
    print_summary(res);
    if (*sweep) cmd_report(res.dir.string());
    if (*simulate) return res.any_error() ? 1 : 0;
    return res.exit_code();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
