#include "fplab/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fplab {

namespace {

constexpr TheoremId kAllTheorems[] = {
    TheoremId::ThmStabilityL2,   TheoremId::ThmStabilityGrad, TheoremId::ThmMain2Lp,
    TheoremId::CorDivLrLqDual,   TheoremId::ThmOneSidedLinf,  TheoremId::ThmHjlipCd,
    TheoremId::ThmSemiconcaveCd, TheoremId::ThmSuperquadraticCd, TheoremId::CorGradientCd,
    TheoremId::ThmL1Cd,          TheoremId::ThmIiLpCd,        TheoremId::ThmIiiAsCd,
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::ThmStabilityL2: return "thm_stability_L2";
    case TheoremId::ThmStabilityGrad: return "thm_stability_grad";
    case TheoremId::ThmMain2Lp: return "thm_main2_Lp";
    case TheoremId::CorDivLrLqDual: return "cor_divLrLq_dual";
    case TheoremId::ThmOneSidedLinf: return "thm_one_sided_Linf";
    case TheoremId::ThmHjlipCd: return "thm_hjlip_cd";
    case TheoremId::ThmSemiconcaveCd: return "thm_semiconcave_cd";
    case TheoremId::ThmSuperquadraticCd: return "thm_superquadratic_cd";
    case TheoremId::CorGradientCd: return "cor_gradient_cd";
    case TheoremId::ThmL1Cd: return "thm_L1_cd";
    case TheoremId::ThmIiLpCd: return "thm_ii_Lp_cd";
    case TheoremId::ThmIiiAsCd: return "thm_iii_AS_cd";
  }
  return "unknown";
}

std::string to_string(ReportStatus status) {
  switch (status) {
    case ReportStatus::Passed: return "passed";
    case ReportStatus::EstimateFailed: return "estimate_failed";
    case ReportStatus::HypothesisFailed: return "hypothesis_failed";
  }
  return "unknown";
}

TheoremId parse_theorem_id(const std::string& text) {
  for (auto id : kAllTheorems) {
    if (to_string(id) == text) return id;
  }
  throw std::invalid_argument("unknown theorem id '" + text + "'");
}

ReportStatus parse_report_status(const std::string& text) {
  for (auto s : {ReportStatus::Passed, ReportStatus::EstimateFailed, ReportStatus::HypothesisFailed}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown report status '" + text + "'");
}

double EstimateReport::constant(const std::string& name) const {
  for (const auto& c : constants) {
    if (c.name == name) return c.value;
  }
  throw std::out_of_range("report has no constant '" + name + "'");
}

double report_tolerance(double lhs, double rhs) {
  return 1e-6 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

EstimateReport make_report(TheoremId id, std::string label, double lhs, double rhs, std::vector<NamedValue> constants) {
  EstimateReport r;
  r.theorem = id;
  r.label = std::move(label);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.constants = std::move(constants);
  const bool ok = std::isfinite(r.slack) ? r.slack >= -report_tolerance(lhs, rhs) : (std::isinf(rhs) && rhs > 0);
  r.status = ok ? ReportStatus::Passed : ReportStatus::EstimateFailed;
  return r;
}

EstimateReport hypothesis_failure(TheoremId id, std::string label, double lhs, double rhs,
                                  std::vector<NamedValue> constants, std::string note) {
  EstimateReport r = make_report(id, std::move(label), lhs, rhs, std::move(constants));
  r.status = ReportStatus::HypothesisFailed;
  r.note = std::move(note);
  return r;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw std::runtime_error("not a number: '" + s + "'");
}

nlohmann::json to_json(const EstimateReport& r) {
  nlohmann::json constants = nlohmann::json::array();
  for (const auto& c : r.constants) constants.push_back({{"name", c.name}, {"value", json_number(c.value)}});
  return {{"schema_version", kReportSchemaVersion},
          {"theorem_id", to_string(r.theorem)},
          {"label", r.label},
          {"lhs", json_number(r.lhs)},
          {"rhs", json_number(r.rhs)},
          {"slack", json_number(r.slack)},
          {"constants_used", constants},
          {"status", to_string(r.status)},
          {"passed", r.passed()},
          {"run_manifest_ref", r.run_manifest_ref},
          {"note", r.note}};
}

EstimateReport report_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw std::runtime_error("unsupported report schema version");
  }
  EstimateReport r;
  r.theorem = parse_theorem_id(j.at("theorem_id").get<std::string>());
  r.label = j.at("label").get<std::string>();
  r.lhs = number_from_json(j.at("lhs"));
  r.rhs = number_from_json(j.at("rhs"));
  r.slack = number_from_json(j.at("slack"));
  for (const auto& c : j.at("constants_used")) {
    r.constants.push_back({c.at("name").get<std::string>(), number_from_json(c.at("value"))});
  }
  r.status = parse_report_status(j.at("status").get<std::string>());
  r.run_manifest_ref = j.value("run_manifest_ref", "");
  r.note = j.value("note", "");
  return r;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string csv_header() { return "theorem_id,label,lhs,rhs,slack,status,run_manifest_ref"; }

std::string to_csv_row(const EstimateReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << to_string(r.theorem) << ',' << csv_escape(r.label) << ',' << r.lhs << ',' << r.rhs << ',' << r.slack << ','
     << to_string(r.status) << ',' << csv_escape(r.run_manifest_ref);
  return os.str();
}

}  // namespace fplab
