#include "fplab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fplab/exponents.hpp"

namespace fplab {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string describe(const std::string& source, std::optional<int> line, const std::string& field,
                     const std::string& message) {
  std::ostringstream os;
  os << source;
  if (line) os << ':' << *line;
  if (!field.empty()) os << ": [" << field << ']';
  os << ": " << message;
  return os.str();
}

double parse_number(const std::string& text) {
  return Exponent::parse(text).to_double();
}

// Numbers may be negative or below one, so fall back to stod before Exponent.
double parse_real(const std::string& text) {
  std::size_t used = 0;
  try {
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  return parse_number(text);
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::optional<int> line, const std::string& field,
                         const std::string& message)
    : std::runtime_error(describe(source, line, field, message)), line_(line), field_(field) {}

Params::Params(std::string source, std::string section, std::map<std::string, std::string> values)
    : source_(std::move(source)), section_(std::move(section)), values_(std::move(values)) {}

const std::string* Params::raw(const std::string& key) {
  used_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

void Params::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(source_, std::nullopt, section_ + "." + key, message);
}

double Params::get_double(const std::string& key, double fallback) {
  const std::string* v = raw(key);
  if (!v) return fallback;
  try {
    return parse_real(*v);
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + *v + "'");
  }
}

int Params::get_int(const std::string& key, int fallback) {
  const std::string* v = raw(key);
  if (!v) return fallback;
  std::size_t used = 0;
  try {
    const int out = std::stoi(*v, &used);
    if (used == v->size()) return out;
  } catch (const std::exception&) {
  }
  fail(key, "expected an integer, got '" + *v + "'");
}

bool Params::get_bool(const std::string& key, bool fallback) {
  const std::string* v = raw(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  fail(key, "expected true or false, got '" + *v + "'");
}

std::string Params::get_string(const std::string& key, const std::string& fallback) {
  const std::string* v = raw(key);
  return v ? *v : fallback;
}

std::vector<double> Params::get_doubles(const std::string& key, const std::vector<double>& fallback) {
  const std::string* v = raw(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(*v)) {
    try {
      out.push_back(parse_real(item));
    } catch (const std::exception&) {
      fail(key, "expected a list of numbers, got '" + item + "'");
    }
  }
  return out;
}

std::vector<int> Params::get_ints(const std::string& key, const std::vector<int>& fallback) {
  const std::string* v = raw(key);
  if (!v) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(*v)) {
    std::size_t used = 0;
    int x = 0;
    try {
      x = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) fail(key, "expected a list of integers, got '" + item + "'");
    out.push_back(x);
  }
  return out;
}

std::vector<std::string> Params::get_strings(const std::string& key, const std::vector<std::string>& fallback) {
  const std::string* v = raw(key);
  return v ? split_list(*v) : fallback;
}

void Params::finish() const {
  for (const auto& [key, value] : values_) {
    if (!used_.count(key)) fail(key, "unknown key");
  }
}

Params ExperimentConfig::params(const std::string& suite) const {
  const auto it = sections.find(suite);
  return Params(source, suite, it == sections.end() ? std::map<std::string, std::string>{} : it->second);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source, static_cast<int>(e.line()), "", e.message());
  }
  ExperimentConfig cfg;
  cfg.source = source;
  for (const auto& [name, section] : tree) {
    if (!section.data().empty()) throw ConfigError(source, std::nullopt, name, "key outside of a section");
    std::map<std::string, std::string> values;
    for (const auto& [key, node] : section) values[key] = trim(node.data());
    cfg.sections[name] = std::move(values);
  }
  const auto exp = cfg.sections.find("experiment");
  if (exp == cfg.sections.end()) throw ConfigError(source, std::nullopt, "experiment", "missing section");
  Params p(source, "experiment", exp->second);
  cfg.id = p.get_string("id", "");
  if (cfg.id.empty() || cfg.id.find_first_of("/\\ ") != std::string::npos) {
    p.fail("id", "must be a non-empty name without spaces or slashes");
  }
  const int seed = p.get_int("seed", 1);
  if (seed < 0) p.fail("seed", "must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.threads = p.get_int("threads", 1);
  if (cfg.threads < 1) p.fail("threads", "must be at least 1");
  cfg.out_dir = p.get_string("out_dir", "runs");
  cfg.suites = p.get_strings("suites", {});
  p.finish();
  cfg.sections.erase(exp);
  for (const auto& [name, values] : cfg.sections) {
    if (std::find(cfg.suites.begin(), cfg.suites.end(), name) == cfg.suites.end()) {
      throw ConfigError(source, std::nullopt, name, "section is not listed in experiment.suites");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), std::nullopt, "", "cannot open file");
  return parse_config(in, path.string());
}

}  // namespace fplab
