#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fplab/experiment.hpp"
#include "fplab/render.hpp"

using namespace fplab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fplab_lab_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmall = R"(
; small experiment
[experiment]
id = small
seed = 5
suites = superquadratic, benton

[superquadratic]
gammas = 2
epsilons = 0.1
points = 32
dt = 1e-2
t_end = 0.5

[benton]
points = 64, 128
)";

ExperimentResult run_small(const fs::path& out) {
  ExperimentOptions o;
  o.out_dir = out;
  return run_experiment(parse(kSmall), o);
}

EstimateReport with_status(ReportStatus s) {
  EstimateReport r = make_report(TheoremId::ThmHjlipCd, "x", 0.0, 1.0);
  r.status = s;
  return r;
}

SuiteResult one_report_suite(const std::string& name, const EstimateReport& r, bool control = false) {
  SuiteResult s;
  s.name = name;
  RunRecord run;
  run.id = "run";
  run.reports = {r};
  run.negative_control = control;
  s.runs = {run};
  return s;
}

}  // namespace

// --- config ---------------------------------------------------------------

TEST(Config, ParsesSectionsAndLists) {
  const ExperimentConfig c = parse(kSmall);
  EXPECT_EQ(c.id, "small");
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.suites, (std::vector<std::string>{"superquadratic", "benton"}));
  Params p = c.params("benton");
  EXPECT_EQ(p.get_ints("points", {}), (std::vector<int>{64, 128}));
  EXPECT_EQ(p.get_double("time", 0.5), 0.5);
  EXPECT_NO_THROW(p.finish());
  EXPECT_TRUE(c.params("l1").values().empty());
}

TEST(Config, TypedGetters) {
  const ExperimentConfig c = parse("[experiment]\nid = a\nsuites = l1\n[l1]\nps = 2, 4/3, inf\nflag = true\nn = 7\nname = x\n");
  Params p = c.params("l1");
  const auto ps = p.get_doubles("ps", {});
  ASSERT_EQ(ps.size(), 3u);
  EXPECT_DOUBLE_EQ(ps[1], 4.0 / 3.0);
  EXPECT_TRUE(std::isinf(ps[2]));
  EXPECT_TRUE(p.get_bool("flag", false));
  EXPECT_EQ(p.get_int("n", 0), 7);
  EXPECT_EQ(p.get_string("name", ""), "x");
  EXPECT_NO_THROW(p.finish());
}

TEST(Config, SyntaxErrorCarriesLine) {
  try {
    parse("[experiment]\nid = a\nthis line is broken\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    ASSERT_TRUE(e.line().has_value());
    EXPECT_EQ(*e.line(), 3);
  }
}

TEST(Config, BadValueNamesField) {
  Params p = parse("[experiment]\nid = a\nsuites = l1\n[l1]\nn = seven\n").params("l1");
  try {
    p.get_int("n", 0);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "l1.n");
  }
}

TEST(Config, UnreadKeyIsRejected) {
  Params p = parse("[experiment]\nid = a\nsuites = l1\n[l1]\nspeling = 1\n").params("l1");
  try {
    p.finish();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "l1.speling");
  }
}

TEST(Config, StructuralErrors) {
  EXPECT_THROW(parse("[l1]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nid = a\nsuites = l1\n[hjlip]\npoints = 8\n"), ConfigError);
}

TEST(Config, SplitList) {
  EXPECT_TRUE(split_list("").empty());
  EXPECT_EQ(split_list(" a, b ,c "), (std::vector<std::string>{"a", "b", "c"}));
}

// --- experiment -----------------------------------------------------------

TEST(Experiment, UnknownSuiteAndKeyFailBeforeRunning) {
  const fs::path out = scratch("unknown");
  ExperimentOptions o;
  o.out_dir = out;
  EXPECT_THROW(run_experiment(parse("[experiment]\nid = a\nsuites = nosuch\n"), o), ConfigError);
  try {
    run_experiment(parse("[experiment]\nid = a\nsuites = benton, l1\n[l1]\nbogus = 1\n"), o);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "l1.bogus");
  }
  EXPECT_FALSE(fs::exists(out / "a" / "manifest.json"));
}

TEST(Experiment, EmptySuiteList) {
  const fs::path out = scratch("empty");
  ExperimentOptions o;
  o.out_dir = out;
  const ExperimentResult r = run_experiment(parse("[experiment]\nid = nothing\nsuites =\n"), o);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_TRUE(r.suites.empty());
  const auto m = nlohmann::json::parse(slurp(out / "nothing" / "manifest.json"));
  EXPECT_TRUE(m.at("suites").empty());
  EXPECT_EQ(m.at("schema_version"), kManifestSchemaVersion);
  EXPECT_EQ(m.at("exit_code"), 0);
  EXPECT_TRUE(verify_manifest(out / "nothing").empty());
  fs::remove_all(out);
}

TEST(Experiment, DeterministicAcrossReruns) {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const ExperimentResult ra = run_small(a);
  const ExperimentResult rb = run_small(b);
  EXPECT_EQ(ra.exit_code(), 0);
  EXPECT_EQ(rb.exit_code(), 0);
  EXPECT_EQ(slurp(a / "small" / "reports.json"), slurp(b / "small" / "reports.json"));
  EXPECT_EQ(slurp(a / "small" / "manifest.json"), slurp(b / "small" / "manifest.json"));
  EXPECT_EQ(slurp(a / "small" / "reports.csv"), slurp(b / "small" / "reports.csv"));
  EXPECT_TRUE(fs::exists(a / "small" / "timing.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, SeedOverrideIsRecorded) {
  const fs::path a = scratch("seed");
  ExperimentOptions o;
  o.out_dir = a;
  o.seed = 99;
  const ExperimentResult r = run_experiment(parse(kSmall), o);
  const auto m = nlohmann::json::parse(slurp(a / "small" / "manifest.json"));
  EXPECT_EQ(m.at("seed"), 99);
  EXPECT_EQ(r.exit_code(), 0);
  fs::remove_all(a);
}

TEST(Experiment, ManifestTamperingIsDetected) {
  const fs::path out = scratch("tamper");
  run_small(out);
  const fs::path dir = out / "small";
  EXPECT_TRUE(verify_manifest(dir).empty());
  fs::path victim;
  for (const auto& e : fs::directory_iterator(dir / "series")) victim = e.path();
  ASSERT_FALSE(victim.empty());
  {
    std::ofstream f(victim, std::ios::app);
    f << "0,0\n";
  }
  EXPECT_FALSE(verify_manifest(dir).empty());
  fs::remove(victim);
  EXPECT_FALSE(verify_manifest(dir).empty());
  fs::remove_all(out);
}

TEST(Experiment, ExitCodeTaxonomy) {
  ExperimentResult r;
  EXPECT_EQ(r.exit_code(), 0);
  r.suites = {one_report_suite("a", with_status(ReportStatus::HypothesisFailed), true)};
  EXPECT_EQ(r.exit_code(), 0);
  r.suites.push_back(one_report_suite("b", with_status(ReportStatus::HypothesisFailed)));
  EXPECT_EQ(r.exit_code(), 3);
  r.suites.push_back(one_report_suite("c", with_status(ReportStatus::EstimateFailed)));
  EXPECT_EQ(r.exit_code(), 2);
  r.suites.back().runs.back().error = "boom";
  EXPECT_EQ(r.exit_code(), 1);
  EXPECT_NE(r.find("b"), nullptr);
  EXPECT_EQ(r.find("zzz"), nullptr);
}

TEST(Experiment, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc", 3), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_FALSE(code_version().empty());
}

// --- suites plumbing --------------------------------------------------------

TEST(Suites, RegistryAndUnknownNames) {
  const auto names = suite_names();
  for (const char* n : {"heat_kernel", "cole_hopf", "stability", "main2_dual", "one_sided", "hjlip",
                        "superquadratic", "l1", "benton"}) {
    EXPECT_TRUE(is_suite(n)) << n;
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end());
  }
  EXPECT_FALSE(is_suite("nosuch"));
  EXPECT_THROW(run_suite("nosuch", {}, {}), std::exception);
}

TEST(Suites, ParallelForCoversAndRethrows) {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(hits.size(), 3, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 2,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("seven");
                            }),
               std::runtime_error);
}

TEST(Suites, CompareRefinement) {
  const EstimateReport base = make_report(TheoremId::ThmHjlipCd, "x", 0.5, 1.0);
  SuiteResult b = one_report_suite("s", base);

  SuiteResult same = one_report_suite("s", make_report(TheoremId::ThmHjlipCd, "x", 0.52, 1.0));
  SuiteResult ok = compare_refinement({b}, {same}, 0.1);
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.metrics.at("compared_reports"), 1.0);
  EXPECT_NEAR(ok.metrics.at("max_relative_slack_change"), 0.02, 1e-12);

  SuiteResult drift = one_report_suite("s", make_report(TheoremId::ThmHjlipCd, "x", 0.8, 1.0));
  EXPECT_FALSE(compare_refinement({b}, {drift}, 0.1).passed());

  SuiteResult flip = one_report_suite("s", make_report(TheoremId::ThmHjlipCd, "x", 1.05, 1.0));
  const SuiteResult f = compare_refinement({b}, {flip}, 0.5);
  EXPECT_FALSE(f.passed());
  EXPECT_EQ(f.metrics.at("pass_to_fail_flips"), 1.0);

  EXPECT_FALSE(compare_refinement({b}, {}, 0.1).passed());
}

// --- render ---------------------------------------------------------------

TEST(Render, SingleTheoremGivesOneRow) {
  const fs::path out = scratch("render_one");
  ExperimentOptions o;
  o.out_dir = out;
  run_experiment(parse("[experiment]\nid = one\nsuites = superquadratic\n[superquadratic]\ngammas = 2\n"
                       "epsilons = 0.1\npoints = 32\ndt = 1e-2\nt_end = 0.5\n"),
                 o);
  const RenderResult r = render_report(out / "one");
  EXPECT_EQ(r.matrix_rows, 1);
  EXPECT_TRUE(r.missing.empty());
  EXPECT_TRUE(fs::exists(r.markdown));
  for (const auto& fig : r.figures) EXPECT_TRUE(fs::exists(fig)) << fig;
  fs::remove_all(out);
}

TEST(Render, HypothesisFailureIsDistinctFromEstimateFailure) {
  const fs::path out = scratch("render_status");
  run_small(out);
  const fs::path manifest = out / "small" / "manifest.json";
  auto m = nlohmann::json::parse(slurp(manifest));
  for (auto& suite : m.at("suites")) {
    for (auto& run : suite.at("runs")) {
      if (run.at("negative_control").get<bool>()) run["negative_control"] = false;
    }
  }
  {
    std::ofstream f(manifest);
    f << m.dump(1);
  }
  const std::string hyp = slurp(render_report(out / "small").markdown);
  EXPECT_NE(hyp.find("*hypothesis*"), std::string::npos);
  EXPECT_EQ(hyp.find("**FAIL**"), std::string::npos);

  auto& first = m.at("suites")[0].at("runs")[0].at("reports")[0];
  first["status"] = to_string(ReportStatus::EstimateFailed);
  {
    std::ofstream f(manifest);
    f << m.dump(1);
  }
  const std::string est = slurp(render_report(out / "small").markdown);
  EXPECT_NE(est.find("**FAIL**"), std::string::npos);
  fs::remove_all(out);
}

TEST(Render, MissingManifestsAreListed) {
  const fs::path out = scratch("render_missing");
  run_small(out);
  fs::create_directories(out / "broken");
  const RenderResult r = render_report(out, out / "bundle");
  ASSERT_EQ(r.missing.size(), 1u);
  EXPECT_NE(r.missing[0].find("broken"), std::string::npos);
  EXPECT_NE(slurp(r.markdown).find("broken"), std::string::npos);
  EXPECT_GE(r.matrix_rows, 1);
  fs::remove_all(out);
}
