#include "fplab/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fplab/benton.hpp"
#include "fplab/experiment.hpp"
#include "fplab/report.hpp"
#include "svg_plot.hpp"

namespace fplab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Loaded {
  fs::path dir;
  json manifest;
};

struct StatusCounts {
  int passed = 0;
  int estimate_failed = 0;
  int hypothesis_failed = 0;
  int control = 0;  // expected hypothesis failures of negative controls
};

const char* const kGreen = "#b7e1b0";
const char* const kRed = "#f4a6a6";
const char* const kAmber = "#f8d38a";
const char* const kGrey = "#dddddd";
const char* const kBlank = "#ffffff";

std::vector<std::pair<double, double>> read_series(const fs::path& path) {
  std::vector<std::pair<double, double>> out;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    out.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return out;
}

const json* find_series(const json& run, const std::string& name) {
  for (const auto& s : run.at("series")) {
    if (s.at("name") == name) return &s;
  }
  return nullptr;
}

double metric(const json& run, const std::string& name, double fallback = NAN) {
  const auto& m = run.at("metrics");
  return m.contains(name) ? number_from_json(m.at(name)) : fallback;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<const json*> suite_runs(const std::vector<Loaded>& all, const std::string& suite) {
  std::vector<const json*> out;
  for (const auto& l : all) {
    for (const auto& s : l.manifest.at("suites")) {
      if (s.at("name") != suite) continue;
      for (const auto& run : s.at("runs")) {
        if (run.at("error").get<std::string>().empty()) out.push_back(&run);
      }
    }
  }
  return out;
}

class Bundle {
 public:
  Bundle(fs::path out, RenderResult& result) : out_(std::move(out)), result_(result) {}

  std::string figure(const std::string& name, const std::string& svg) {
    std::ofstream(out_ / name) << svg;
    result_.figures.push_back(out_ / name);
    return "![" + name + "](" + name + ")\n\n";
  }

 private:
  fs::path out_;
  RenderResult& result_;
};

std::string status_section(const std::vector<Loaded>& all, Bundle& bundle, RenderResult& result) {
  std::map<std::string, StatusCounts> counts;
  for (const auto& l : all) {
    for (const auto& s : l.manifest.at("suites")) {
      for (const auto& run : s.at("runs")) {
        const bool control = run.value("negative_control", false);
        for (const auto& r : run.at("reports")) {
          auto& c = counts[r.at("theorem_id").get<std::string>()];
          const auto status = parse_report_status(r.at("status").get<std::string>());
          if (status == ReportStatus::Passed) ++c.passed;
          if (status == ReportStatus::EstimateFailed) ++c.estimate_failed;
          if (status == ReportStatus::HypothesisFailed) ++(control ? c.control : c.hypothesis_failed);
        }
      }
    }
  }
  result.matrix_rows = static_cast<int>(counts.size());
  std::string md = "## Pass/fail matrix\n\n";
  if (counts.empty()) return md + "No estimate reports.\n\n";
  md += "| theorem | passed | estimate failed | hypothesis failed | negative control |\n|---|---|---|---|---|\n";
  std::vector<std::string> rows;
  std::vector<std::vector<detail::GridCell>> cells;
  for (const auto& [id, c] : counts) {
    md += "| " + id + " | " + std::to_string(c.passed) + " | " + std::to_string(c.estimate_failed) +
          (c.estimate_failed > 0 ? " **FAIL**" : "") + " | " + std::to_string(c.hypothesis_failed) +
          (c.hypothesis_failed > 0 ? " *hypothesis*" : "") + " | " + std::to_string(c.control) + " |\n";
    rows.push_back(id);
    cells.push_back({{std::to_string(c.passed), c.passed > 0 ? kGreen : kBlank},
                     {std::to_string(c.estimate_failed), c.estimate_failed > 0 ? kRed : kBlank},
                     {std::to_string(c.hypothesis_failed), c.hypothesis_failed > 0 ? kAmber : kBlank},
                     {std::to_string(c.control), c.control > 0 ? kGrey : kBlank}});
  }
  md += "\n";
  md += bundle.figure("status_matrix.svg",
                      detail::render_grid("Report status by theorem",
                                          {"passed", "estimate failed", "hypothesis failed", "negative control"},
                                          rows, cells));
  return md;
}

std::string suite_section(const std::vector<Loaded>& all) {
  std::string md = "## Suites\n\n| experiment | suite | result | notes |\n|---|---|---|---|\n";
  for (const auto& l : all) {
    for (const auto& s : l.manifest.at("suites")) {
      std::string notes;
      for (const auto& f : s.at("failures")) notes += (notes.empty() ? "" : "; ") + f.get<std::string>();
      md += "| " + l.manifest.at("experiment").get<std::string>() + " | " + s.at("name").get<std::string>() + " | " +
            (s.at("passed").get<bool>() ? "pass" : "**fail**") + " | " + notes + " |\n";
    }
  }
  return md + "\n";
}

std::string margin_section(const std::vector<Loaded>& all, Bundle& bundle) {
  std::map<std::string, std::map<double, std::vector<double>>> groups;
  for (const json* run : suite_runs(all, "stability")) {
    if (run->at("id").get<std::string>().rfind("drift", 0) != 0) continue;
    const double margin = metric(*run, "margin");
    const double dim = metric(*run, "dim");
    for (const auto& r : run->at("reports")) {
      const double rhs = number_from_json(r.at("rhs"));
      const double slack = number_from_json(r.at("slack"));
      if (!(rhs > 0.0) || !std::isfinite(slack)) continue;
      groups[r.at("label").get<std::string>() + " n=" + format_number(dim)][margin].push_back(slack / rhs);
    }
  }
  if (groups.empty()) return {};
  detail::LinePlot plot;
  plot.title = "Median relative slack against margin";
  plot.x_label = "margin";
  plot.y_label = "slack / rhs";
  std::string table = "| series | margin | median slack/rhs |\n|---|---|---|\n";
  for (const auto& [name, by_margin] : groups) {
    detail::PlotSeries s;
    s.name = name;
    for (const auto& [m, v] : by_margin) {
      s.x.push_back(m);
      s.y.push_back(median(v));
      table += "| " + name + " | " + format_number(m) + " | " + format_number(s.y.back()) + " |\n";
    }
    plot.series.push_back(s);
  }
  return "## Slack against margin\n\n" + bundle.figure("slack_vs_margin.svg", detail::render_line_plot(plot)) + table +
         "\n";
}

std::string overlay(const std::vector<Loaded>& all, const std::vector<const json*>& runs, const std::string& series,
                     const std::string& title, const std::string& file, Bundle& bundle) {
  detail::LinePlot plot;
  plot.title = title;
  plot.x_label = "t";
  plot.y_label = "sup |w(t)|";
  plot.log_x = true;
  for (const json* run : runs) {
    const json* s = find_series(*run, series);
    if (s == nullptr) continue;
    detail::PlotSeries ps;
    ps.name = "eps=" + format_number(run->at("config").at("epsilon").get<double>());
    ps.markers = false;
    for (const auto& l : all) {
      const fs::path path = l.dir / s->at("file").get<std::string>();
      if (!fs::exists(path)) continue;
      for (const auto& [t, v] : read_series(path)) {
        ps.x.push_back(t);
        ps.y.push_back(v);
      }
      break;
    }
    plot.series.push_back(ps);
  }
  if (plot.series.empty()) return {};
  return bundle.figure(file, detail::render_line_plot(plot));
}

std::string epsilon_section(const std::vector<Loaded>& all, Bundle& bundle) {
  std::string md;
  std::map<double, std::vector<const json*>> by_c1;
  for (const json* run : suite_runs(all, "one_sided")) by_c1[metric(*run, "c1")].push_back(run);
  for (const auto& [c1, runs] : by_c1) {
    md += overlay(all, runs, "w_sup", "One-sided drift, c1=" + format_number(c1) + ": sup|w| for each epsilon",
                  "eps_overlay_one_sided_c1_" + format_number(c1) + ".svg", bundle);
  }
  std::vector<const json*> hj;
  for (const json* run : suite_runs(all, "hjlip")) {
    if (run->at("config").value("pair", std::string()) == "cole_hopf") hj.push_back(run);
  }
  md += overlay(all, hj, "w_sup", "Cole-Hopf pair: sup|u1-u2| for each epsilon", "eps_overlay_hjlip.svg", bundle);
  return md.empty() ? md : "## Epsilon independence\n\n" + md;
}

std::string p_section(const std::vector<Loaded>& all, Bundle& bundle) {
  detail::LinePlot plot;
  plot.title = "Convergence of ||w(T)||_p to ||w(T)||_inf";
  plot.x_label = "p";
  plot.y_label = "1 - ||w||_p / ||w||_inf";
  plot.log_x = true;
  plot.log_y = true;
  for (const json* run : suite_runs(all, "one_sided")) {
    const double sup = metric(*run, "norm p=inf");
    if (!(sup > 0.0)) continue;
    detail::PlotSeries s;
    s.name = run->at("id").get<std::string>();
    std::map<double, double> pts;
    for (const auto& [k, v] : run->at("metrics").items()) {
      if (k.rfind("norm p=", 0) != 0 || k == "norm p=inf") continue;
      pts[std::stod(k.substr(7))] = 1.0 - number_from_json(v) / sup;
    }
    for (const auto& [p, gap] : pts) {
      s.x.push_back(p);
      s.y.push_back(gap);
    }
    plot.series.push_back(s);
    if (plot.series.size() == 10) break;
  }
  if (plot.series.empty()) return {};
  return "## p-norm convergence\n\n" + bundle.figure("p_convergence.svg", detail::render_line_plot(plot));
}

std::string benton_section(const std::vector<Loaded>& all, Bundle& bundle) {
  const auto runs = suite_runs(all, "benton");
  if (runs.empty()) return {};
  const json& run = *runs.front();
  const double t = run.at("config").at("time").get<double>();
  detail::LinePlot sol;
  sol.title = "Benton solutions at t=" + format_number(t);
  sol.x_label = "x";
  sol.y_label = "u";
  const char* names[] = {"u1", "u2", "u3"};
  double (*fns[])(double, double) = {benton_u1, benton_u2, benton_u3};
  for (int k = 0; k < 3; ++k) {
    detail::PlotSeries s;
    s.name = names[k];
    s.markers = false;
    s.dashed = k == 1;
    for (int i = 0; i <= 400; ++i) {
      const double x = -1.0 + 2.0 * i / 400.0;
      s.x.push_back(x);
      s.y.push_back(fns[k](x, t));
    }
    sol.series.push_back(s);
  }
  std::string md = "## Benton example\n\n" + bundle.figure("benton.svg", detail::render_line_plot(sol));
  md += "sup |u3 - u1| = " + format_number(metric(run, "sup_distance")) +
        ", kink slope = " + format_number(metric(run, "kink_slope")) + "\n\n";
  const json* s = find_series(run, "kink_laplacian_vs_spacing");
  if (s != nullptr) {
    for (const auto& l : all) {
      const fs::path path = l.dir / s->at("file").get<std::string>();
      if (!fs::exists(path)) continue;
      detail::LinePlot kink;
      kink.title = "Second difference at the kink";
      kink.x_label = "h";
      kink.y_label = "max |D2 u3|";
      kink.log_x = true;
      kink.log_y = true;
      detail::PlotSeries ps;
      ps.name = "u3";
      for (const auto& [h, v] : read_series(path)) {
        ps.x.push_back(h);
        ps.y.push_back(v);
      }
      kink.series.push_back(ps);
      md += bundle.figure("benton_kink.svg", detail::render_line_plot(kink));
      break;
    }
  }
  return md;
}

}  // namespace

RenderResult render_report(const fs::path& dir, const fs::path& out_dir) {
  RenderResult result;
  const fs::path out = out_dir.empty() ? dir / "report" : out_dir;
  fs::create_directories(out);

  std::vector<fs::path> candidates;
  if (fs::exists(dir / "manifest.json")) {
    candidates.push_back(dir);
  } else if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && entry.path() != out) candidates.push_back(entry.path());
    }
    std::sort(candidates.begin(), candidates.end());
  } else {
    result.missing.push_back(dir.string() + " (no such directory)");
  }

  std::vector<Loaded> all;
  for (const auto& c : candidates) {
    if (!fs::exists(c / "manifest.json")) {
      result.missing.push_back((c / "manifest.json").string());
      continue;
    }
    try {
      std::ifstream in(c / "manifest.json");
      all.push_back({c, json::parse(in)});
    } catch (const std::exception& e) {
      result.missing.push_back((c / "manifest.json").string() + " (" + e.what() + ")");
      continue;
    }
    for (const auto& p : verify_manifest(c)) result.missing.push_back(p);
  }

  Bundle bundle(out, result);
  std::string md = "# Verification report\n\n";
  for (const auto& l : all) {
    md += "- experiment `" + l.manifest.at("experiment").get<std::string>() + "`, seed " +
          std::to_string(l.manifest.at("seed").get<std::uint64_t>()) + ", code " +
          l.manifest.at("code_version").get<std::string>() + ", exit code " +
          std::to_string(l.manifest.at("exit_code").get<int>()) + "\n";
  }
  md += "\n";
  const auto section = [&](auto&& fn) {
    try {
      md += fn();
    } catch (const std::exception& e) {
      md += "*section skipped: " + std::string(e.what()) + "*\n\n";
    }
  };
  section([&] { return status_section(all, bundle, result); });
  section([&] { return suite_section(all); });
  section([&] { return margin_section(all, bundle); });
  section([&] { return epsilon_section(all, bundle); });
  section([&] { return p_section(all, bundle); });
  section([&] { return benton_section(all, bundle); });

  md += "## Missing manifests\n\n";
  if (result.missing.empty()) md += "None.\n";
  for (const auto& m : result.missing) md += "- " + m + "\n";

  result.markdown = out / "report.md";
  std::ofstream(result.markdown) << md;
  return result;
}

}  // namespace fplab
