#include "qsl/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qsl/error.hpp"
#include "qsl/observables.hpp"

namespace qsl {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void config_error(int line, const std::string& msg) {
  fail(ErrorKind::ConfigValidation, (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + msg);
}

double parse_double(std::string_view text, int line = 0) {
  const std::string t = trim(text);
  if (t == "pi") return kPi;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) config_error(line, "not a number: '" + t + "'");
  return v;
}

long parse_long(std::string_view text, int line = 0) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) config_error(line, "not an integer: '" + t + "'");
  return v;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  config_error(line, "not a boolean: '" + v + "'");
}

// Unrecognized keys become named selections.
void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value, int line) {
  if (key == "k") {
    c.ks.clear();
    for (double v : parse_number_list(value)) {
      if (v != std::floor(v)) config_error(line, "k values must be integers");
      c.ks.push_back(static_cast<int>(v));
    }
  } else if (key == "seed") {
    const long s = parse_long(value, line);
    if (s < 0) config_error(line, "seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "oversample") {
    c.oversample = parse_double(value, line);
  } else if (key == "steps") {
    c.steps = static_cast<int>(parse_long(value, line));
  } else if (key == "heavy") {
    c.heavy = parse_bool(value, line);
  } else if (key == "s_rule") {
    c.s_rule = value;
  } else if (key.rfind("tolerance.", 0) == 0) {
    c.tolerances[key.substr(10)] = parse_double(value, line);
  } else {
    c.selections[key] = value;
  }
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (!trim(part).empty()) out.push_back(parse_double(part));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

IniDocument parse_ini(std::string_view text) {
  IniDocument doc;
  IniSection* current = &doc.top;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') config_error(line, "unterminated section header");
      const std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
      if (name.empty()) config_error(line, "empty section name");
      for (const auto& sec : doc.sections)
        if (sec.name == name) config_error(line, "duplicate section [" + name + "]");
      doc.sections.push_back({name, {}, line});
      current = &doc.sections.back();
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) config_error(line, "expected key = value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) config_error(line, "empty key");
    for (const auto& [k, v] : current->entries)
      if (k == key) config_error(line, "duplicate key '" + key + "'");
    current->entries.emplace_back(key, value);
  }
  return doc;
}

void ExperimentConfig::validate() const {
  if (id.empty()) fail(ErrorKind::ConfigValidation, "experiment id missing");
  if (ks.empty()) fail(ErrorKind::ConfigValidation, id + ": empty k list");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 2) fail(ErrorKind::ConfigValidation, id + ": k values must be at least 2");
    if (i > 0 && ks[i] <= ks[i - 1]) fail(ErrorKind::ConfigValidation, id + ": k list must be strictly increasing");
  }
  if (!seed) fail(ErrorKind::ConfigValidation, id + ": seed missing");
  if (oversample < 1.0) fail(ErrorKind::ConfigValidation, id + ": oversample must be at least 1");
  if (steps < 1) fail(ErrorKind::ConfigValidation, id + ": steps must be positive");
  if (!s_rule.empty()) parse_s_rule(s_rule);
}

double ExperimentConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

std::string ExperimentConfig::selection(const std::string& name, const std::string& fallback) const {
  const auto it = selections.find(name);
  return it == selections.end() ? fallback : it->second;
}

std::vector<double> ExperimentConfig::selection_list(const std::string& name,
                                                     const std::vector<double>& fallback) const {
  const auto it = selections.find(name);
  return it == selections.end() ? fallback : parse_number_list(it->second);
}

SuiteConfig parse_suite(std::string_view text, const std::filesystem::path& base_dir) {
  const IniDocument doc = parse_ini(text);
  SuiteConfig suite;
  ExperimentConfig defaults;
  bool have_schema = false;
  for (const auto& [key, value] : doc.top.entries) {
    if (key == "schema") {
      if (parse_long(value) != 1) fail(ErrorKind::ConfigValidation, "unsupported schema " + value);
      have_schema = true;
    } else if (key == "output") {
      suite.output_dir = value;
    } else if (key == "threads") {
      suite.threads = static_cast<int>(parse_long(value));
    } else {
      apply_key(defaults, key, value, 0);
    }
  }
  if (!have_schema) fail(ErrorKind::ConfigValidation, "missing schema = 1");
  if (suite.output_dir.is_relative() && !base_dir.empty()) suite.output_dir = base_dir / suite.output_dir;
  for (const auto& sec : doc.sections) {
    ExperimentConfig c = defaults;
    c.id = sec.name;
    for (const auto& [key, value] : sec.entries) apply_key(c, key, value, sec.line);
    c.output_dir = suite.output_dir;
    c.validate();
    suite.experiments.push_back(std::move(c));
  }
  if (suite.experiments.empty()) fail(ErrorKind::ConfigValidation, "no experiments configured");
  return suite;
}

SuiteConfig load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str());
}

std::function<double(double)> parse_s_rule(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorKind::ConfigValidation, "s_rule needs kind:value, got '" + text + "'");
  const std::string kind = trim(std::string_view(text).substr(0, colon));
  const double v = parse_double(std::string_view(text).substr(colon + 1));
  if (kind == "power") {
    if (!(v > 0.0 && v < 0.5)) fail(ErrorKind::ConfigValidation, "s_rule power must lie in (0, 1/2)");
    return [v](double h) { return std::pow(h, v); };
  }
  if (kind == "sqrt") {
    if (!(v > 0.0)) fail(ErrorKind::ConfigValidation, "s_rule sqrt factor must be positive");
    return [v](double h) { return std::min(1.0, v * std::sqrt(h)); };
  }
  if (kind == "fixed") {
    if (!(v > 0.0 && v <= 1.0)) fail(ErrorKind::ConfigValidation, "fixed s must lie in (0, 1]");
    return [v](double) { return v; };
  }
  fail(ErrorKind::ConfigValidation, "unknown s_rule kind '" + kind + "'");
}

Observable parse_observable(const std::string& text, const EquatorialChart& chart) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  const std::string name = trim(std::string_view(t).substr(0, open));
  std::vector<double> args;
  if (open != std::string::npos) {
    if (t.back() != ')') fail(ErrorKind::ConfigValidation, "unbalanced parentheses in '" + t + "'");
    args = parse_number_list(std::string_view(t).substr(open + 1, t.size() - open - 2));
  }
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      fail(ErrorKind::ConfigValidation, name + " takes " + std::to_string(n) + " arguments, got " +
                                            std::to_string(args.size()));
  };
  if (name == "x1" || name == "x2" || name == "x3") {
    want(0);
    return observables::coordinate(name[1] - '1');
  }
  if (name == "const") {
    want(1);
    return observables::constant(args[0]);
  }
  if (name == "rotation") {
    want(4);
    return observables::rotation_generator(Vec3(args[0], args[1], args[2]), args[3]);
  }
  if (name == "cap") {
    want(5);
    return observables::cap_bump(Vec3(args[0], args[1], args[2]), args[3], args[4]);
  }
  if (name == "chart-rotation") {
    want(3);
    return observables::chart_rotation(chart, args[0], args[1], args[2]);
  }
  if (name == "chart-bump") {
    want(4);
    return observables::chart_bump(chart, Vec2(args[0], args[1]), args[2], args[3]);
  }
  if (name == "chart-translation") {
    want(2);
    return observables::chart_translation(chart, args[0], args[1]);
  }
  fail(ErrorKind::ConfigValidation, "unknown observable '" + name + "'");
}

}  // namespace qsl
