#pragma once

// INI experiment configuration with section/key diagnostics.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fplab {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::optional<int> line, const std::string& field, const std::string& message);

  [[nodiscard]] std::optional<int> line() const { return line_; }
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::optional<int> line_;
  std::string field_;
};

/// Typed access to one section. Every key must be read before finish().
class Params {
 public:
  Params() = default;
  Params(std::string source, std::string section, std::map<std::string, std::string> values);

  [[nodiscard]] const std::string& section() const { return section_; }
  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  /// Comma-separated list; exponents may be "inf" or "a/b".
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback);
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback);
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback);

  /// Throws ConfigError naming the first key that was never read.
  void finish() const;
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

 private:
  const std::string* raw(const std::string& key);

  std::string source_;
  std::string section_;
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

struct ExperimentConfig {
  std::string source;
  std::string id;
  std::uint64_t seed = 1;
  int threads = 1;
  std::filesystem::path out_dir = "runs";
  /// Suite names in execution order.
  std::vector<std::string> suites;
  /// One entry per section other than [experiment], keyed by section name.
  std::map<std::string, std::map<std::string, std::string>> sections;

  /// Parameters of a suite section (empty when the section is absent).
  [[nodiscard]] Params params(const std::string& suite) const;
};

/// Parses INI text. `source` names the input in diagnostics.
ExperimentConfig parse_config(std::istream& in, const std::string& source);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Splits on commas and trims whitespace; empty input gives an empty list.
std::vector<std::string> split_list(const std::string& text);

}  // namespace fplab
