#include "fplab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "fplab/field_io.hpp"

#ifndef FPLAB_CODE_VERSION
#define FPLAB_CODE_VERSION "unknown"
#endif

namespace fplab {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kDefaultRefined = {"stability", "main2_dual", "one_sided", "hjlip"};

bool has_hypothesis_failure(const SuiteResult& s) {
  for (const auto& run : s.runs) {
    if (run.negative_control) continue;
    for (const auto& r : run.reports) {
      if (r.status == ReportStatus::HypothesisFailed) return true;
    }
  }
  return false;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

/// Writes bytes under dir/sub/<sha>.<ext> unless already present; returns the relative path.
std::pair<std::string, std::string> store(const fs::path& dir, const std::string& sub, const std::string& ext,
                                          const std::string& bytes) {
  const std::string hash = sha256_hex(bytes.data(), bytes.size());
  const std::string rel = sub + "/" + hash + ext;
  if (!fs::exists(dir / rel)) write_text(dir / rel, bytes);
  return {rel, hash};
}

std::string series_csv(const TimeSeries& s) {
  std::string out = "t,value\n";
  char buf[64];
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.times[i], s.values[i]);
    out += buf;
  }
  return out;
}

nlohmann::json metrics_json(const std::map<std::string, double>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : m) j[k] = json_number(v);
  return j;
}

nlohmann::json suite_json(const SuiteResult& suite, const fs::path& dir, nlohmann::json& reports) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : suite.runs) {
    const std::string ref = suite.name + "/" + run.id;
    nlohmann::json series = nlohmann::json::array();
    for (const auto& s : run.series) {
      const auto [file, hash] = store(dir, "series", ".csv", series_csv(s.series));
      nlohmann::json e = {{"name", s.name}, {"file", file}, {"sha256", hash}, {"samples", s.series.times.size()}};
      e["leading_power"] = s.series.leading_power ? json_number(*s.series.leading_power) : nlohmann::json(nullptr);
      series.push_back(e);
    }
    nlohmann::json trajectories = nlohmann::json::array();
    for (const auto& [name, traj] : run.trajectories) {
      const auto bytes = encode_trajectory(traj);
      const auto [file, hash] = store(dir, "trajectories", ".bin", std::string(bytes.begin(), bytes.end()));
      trajectories.push_back({{"name", name},
                              {"file", file},
                              {"sha256", hash},
                              {"dim", traj.grid().dim()},
                              {"points", traj.grid().points_per_axis()},
                              {"snapshots", traj.size()}});
    }
    nlohmann::json run_reports = nlohmann::json::array();
    for (auto r : run.reports) {
      r.run_manifest_ref = ref;
      const auto j = to_json(r);
      run_reports.push_back(j);
      reports.push_back(j);
    }
    runs.push_back({{"id", run.id},
                    {"ref", ref},
                    {"config", run.config},
                    {"drift", run.drift},
                    {"negative_control", run.negative_control},
                    {"error", run.error},
                    {"metrics", metrics_json(run.metrics)},
                    {"series", series},
                    {"trajectories", trajectories},
                    {"reports", run_reports}});
  }
  return {{"name", suite.name},
          {"passed", suite.passed()},
          {"metrics", metrics_json(suite.metrics)},
          {"failures", suite.failures},
          {"runs", runs}};
}

nlohmann::json timing_json(const SuiteResult& suite) {
  nlohmann::json runs = nlohmann::json::object();
  for (const auto& run : suite.runs) runs[run.id] = run.seconds;
  return {{"suite", metrics_json(suite.timings)}, {"runs", runs}};
}

void write_results(const ExperimentResult& res, const ExperimentConfig& cfg, std::uint64_t seed, int threads) {
  const fs::path& dir = res.dir;
  fs::create_directories(dir / "trajectories");
  fs::create_directories(dir / "series");

  nlohmann::json reports = nlohmann::json::array();
  nlohmann::json suites = nlohmann::json::array();
  nlohmann::json timing = {{"threads", threads}, {"suites", nlohmann::json::object()}};
  auto add = [&](const SuiteResult& s) {
    suites.push_back(suite_json(s, dir, reports));
    timing["suites"][s.name] = timing_json(s);
  };
  for (const auto& s : res.suites) add(s);
  for (const auto& s : res.refined) add(s);

  nlohmann::json sections = nlohmann::json::object();
  for (const auto& [name, kv] : cfg.sections) sections[name] = kv;
  const nlohmann::json manifest = {{"schema_version", kManifestSchemaVersion},
                                   {"experiment", res.id},
                                   {"code_version", code_version()},
                                   {"seed", seed},
                                   {"config", {{"suites", cfg.suites}, {"sections", sections}}},
                                   {"exit_code", res.exit_code()},
                                   {"suites", suites},
                                   {"timing_file", "timing.json"}};
  write_text(dir / "manifest.json", manifest.dump(1) + "\n");

  const nlohmann::json report_doc = {{"schema_version", kReportSchemaVersion},
                                     {"experiment", res.id},
                                     {"code_version", code_version()},
                                     {"seed", seed},
                                     {"reports", reports}};
  write_text(dir / "reports.json", report_doc.dump(1) + "\n");

  std::string csv = csv_header() + "\n";
  for (const auto& r : reports) csv += to_csv_row(report_from_json(r)) + "\n";
  write_text(dir / "reports.csv", csv);
  write_text(dir / "timing.json", timing.dump(1) + "\n");
}

}  // namespace

bool ExperimentResult::any_error() const {
  auto check = [](const SuiteResult& s) {
    return std::any_of(s.runs.begin(), s.runs.end(), [](const RunRecord& r) { return !r.error.empty(); });
  };
  return std::any_of(suites.begin(), suites.end(), check) || std::any_of(refined.begin(), refined.end(), check);
}

bool ExperimentResult::any_estimate_failure() const {
  return std::any_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return !s.passed(); });
}

bool ExperimentResult::any_hypothesis_failure() const {
  return std::any_of(suites.begin(), suites.end(), has_hypothesis_failure);
}

int ExperimentResult::exit_code() const {
  if (any_error()) return 1;
  if (any_estimate_failure()) return 2;
  if (any_hypothesis_failure()) return 3;
  return 0;
}

const SuiteResult* ExperimentResult::find(const std::string& name) const {
  for (const auto* list : {&suites, &refined}) {
    for (const auto& s : *list) {
      if (s.name == name) return &s;
    }
  }
  return nullptr;
}

std::string code_version() { return FPLAB_CODE_VERSION; }

std::string sha256_hex(const void* data, std::size_t size) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data, size, digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& opts) {
  SuiteContext ctx;
  ctx.seed = opts.seed.value_or(cfg.seed);
  ctx.threads = opts.threads.value_or(cfg.threads);
  if (ctx.threads < 1) throw ConfigError(cfg.source, std::nullopt, "threads", "must be at least 1");

  ExperimentResult res;
  res.id = cfg.id;
  res.dir = opts.out_dir.value_or(cfg.out_dir) / cfg.id;

  // Every section is checked before any run starts.
  std::vector<std::string> refined_names = kDefaultRefined;
  double fraction = 0.1;
  const bool refine = std::find(cfg.suites.begin(), cfg.suites.end(), "refinement") != cfg.suites.end();
  for (const auto& name : cfg.suites) {
    if (name == "refinement") {
      Params p = cfg.params(name);
      refined_names = p.get_strings("suites", kDefaultRefined);
      fraction = p.get_double("fraction", fraction);
      p.finish();
      for (const auto& r : refined_names) {
        if (std::find(cfg.suites.begin(), cfg.suites.end(), r) == cfg.suites.end()) {
          throw ConfigError(cfg.source, std::nullopt, "refinement.suites", "'" + r + "' is not in the suite list");
        }
      }
      continue;
    }
    if (!is_suite(name)) throw ConfigError(cfg.source, std::nullopt, "experiment.suites", "unknown suite '" + name + "'");
    SuiteContext dry = ctx;
    dry.validate_only = true;
    run_suite(name, cfg.params(name), dry);
  }

  for (const auto& name : cfg.suites) {
    if (name == "refinement") continue;
    res.suites.push_back(run_suite(name, cfg.params(name), ctx));
  }
  if (refine) {
    SuiteContext fine = ctx;
    fine.refined = true;
    std::vector<SuiteResult> base;
    for (const auto& name : refined_names) {
      SuiteResult r = run_suite(name, cfg.params(name), fine);
      base.push_back(*res.find(name));
      res.refined.push_back(r);
    }
    SuiteResult cmp = compare_refinement(base, res.refined, fraction);
    for (auto& r : res.refined) r.name += ":refined";
    res.suites.push_back(std::move(cmp));
  }
  write_results(res, cfg, ctx.seed, ctx.threads);
  return res;
}

std::vector<std::string> verify_manifest(const fs::path& dir) {
  std::vector<std::string> problems;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_text(dir / "manifest.json"));
  } catch (const std::exception& e) {
    return {std::string("manifest.json: ") + e.what()};
  }
  auto check = [&](const nlohmann::json& entry) {
    const fs::path path = dir / entry.at("file").get<std::string>();
    if (!fs::exists(path)) {
      problems.push_back("missing " + path.string());
      return;
    }
    const std::string bytes = read_text(path);
    if (sha256_hex(bytes.data(), bytes.size()) != entry.at("sha256").get<std::string>()) {
      problems.push_back("hash mismatch " + path.string());
    }
  };
  for (const auto& suite : manifest.at("suites")) {
    for (const auto& run : suite.at("runs")) {
      for (const auto& s : run.at("series")) check(s);
      for (const auto& t : run.at("trajectories")) check(t);
    }
  }
  for (const char* name : {"reports.json", "reports.csv", "timing.json"}) {
    if (!fs::exists(dir / name)) problems.push_back(std::string("missing ") + (dir / name).string());
  }
  return problems;
}

}  // namespace fplab
