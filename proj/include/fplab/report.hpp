#pragma once

// One verified inequality and its serializations.

#include <string>
#include <vector>

#include <json.hpp>

namespace fplab {

inline constexpr int kReportSchemaVersion = 1;

enum class TheoremId {
  ThmStabilityL2,
  ThmStabilityGrad,
  ThmMain2Lp,
  CorDivLrLqDual,
  ThmOneSidedLinf,
  ThmHjlipCd,
  ThmSemiconcaveCd,
  ThmSuperquadraticCd,
  CorGradientCd,
  ThmL1Cd,
  ThmIiLpCd,
  ThmIiiAsCd,
};

enum class ReportStatus { Passed, EstimateFailed, HypothesisFailed };

std::string to_string(TheoremId id);
std::string to_string(ReportStatus status);
TheoremId parse_theorem_id(const std::string& text);
ReportStatus parse_report_status(const std::string& text);

struct NamedValue {
  std::string name;
  double value = 0.0;
};

struct EstimateReport {
  TheoremId theorem = TheoremId::ThmStabilityL2;
  std::string label;  // distinguishes runs of the same theorem
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::vector<NamedValue> constants;
  ReportStatus status = ReportStatus::Passed;
  std::string run_manifest_ref;
  std::string note;

  [[nodiscard]] bool passed() const { return status == ReportStatus::Passed; }
  [[nodiscard]] double constant(const std::string& name) const;
};

/// 1e-6 max(|lhs|, |rhs|, 1).
double report_tolerance(double lhs, double rhs);

/// Builds a report with slack = rhs - lhs and status from the tolerance rule.
EstimateReport make_report(TheoremId id, std::string label, double lhs, double rhs,
                           std::vector<NamedValue> constants = {});
/// Same, but routed to HypothesisFailed regardless of the inequality.
EstimateReport hypothesis_failure(TheoremId id, std::string label, double lhs, double rhs,
                                  std::vector<NamedValue> constants, std::string note);

/// Finite values as numbers, others as "inf", "-inf" or "nan".
nlohmann::json json_number(double v);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EstimateReport& r);
EstimateReport report_from_json(const nlohmann::json& j);

/// Shortest %g rendering, used in labels.
std::string format_number(double v);

std::string csv_header();
std::string to_csv_row(const EstimateReport& r);

}  // namespace fplab
