#include "qsl/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "qsl/error.hpp"

namespace qsl {

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      cell += c;
      any = true;
    }
  }
  if (any || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& s) {
  if (s.empty()) return std::nan("");
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    fail(ErrorKind::MissingInputs, "bad number '" + s + "' in verdicts.csv");
  }
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string threshold_text(const Verdict& v) {
  if (v.comparator == "in") return "[" + format_number(v.threshold) + ", " + format_number(v.threshold_hi) + "]";
  if (v.comparator == "==") return "true";
  return v.comparator + " " + format_number(v.threshold);
}

}  // namespace

std::vector<Verdict> read_verdicts(const std::filesystem::path& dir) {
  const auto path = dir / "verdicts.csv";
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::MissingInputs, "no verdicts.csv in " + dir.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto rows = parse_csv(ss.str());
  require(rows.size() > 1, ErrorKind::MissingInputs, "verdicts.csv in " + dir.string() + " has no rows");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
  for (const char* name : {"experiment", "claim", "criterion", "metric", "comparator", "threshold", "threshold_hi",
                           "measured", "pass", "note"})
    require(col.count(name) != 0, ErrorKind::MissingInputs, std::string("verdicts.csv lacks column ") + name);

  std::vector<Verdict> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    require(row.size() == rows[0].size(), ErrorKind::MissingInputs,
            "verdicts.csv row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) + " cells");
    Verdict v;
    v.experiment = row[col["experiment"]];
    v.claim = row[col["claim"]];
    v.criterion = static_cast<int>(parse_double(row[col["criterion"]]));
    v.metric = row[col["metric"]];
    v.comparator = row[col["comparator"]];
    v.threshold = parse_double(row[col["threshold"]]);
    v.threshold_hi = parse_double(row[col["threshold_hi"]]);
    v.measured = parse_double(row[col["measured"]]);
    v.pass = row[col["pass"]] == "true";
    v.note = row[col["note"]];
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CriterionStatus> criterion_status(const std::vector<Verdict>& verdicts) {
  const auto& names = criterion_names();
  std::vector<CriterionStatus> out;
  for (std::size_t i = 1; i < names.size(); ++i) {
    CriterionStatus s;
    s.criterion = static_cast<int>(i);
    s.name = names[i];
    for (const auto& v : verdicts) {
      if (v.criterion != s.criterion) continue;
      ++s.claims;
      if (!v.pass) s.failed.push_back(v.experiment + "/" + v.claim);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_criterion(const CriterionStatus& s) {
  std::string line = std::string(s.pass() ? "PASS" : "FAIL") + " criterion " + std::to_string(s.criterion) + ": " +
                     s.name + " (" + std::to_string(s.claims) + " verdicts";
  if (s.claims == 0) line += ", none measured";
  if (!s.failed.empty()) {
    line += "; failed:";
    for (const auto& f : s.failed) line += " " + f;
  }
  return line + ")";
}

bool Report::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionStatus& s) { return s.pass(); });
}

Report emit_report(const std::filesystem::path& dir) {
  Report rep;
  rep.verdicts = read_verdicts(dir);
  rep.criteria = criterion_status(rep.verdicts);

  std::ostringstream text;
  std::vector<std::string> experiments;
  for (const auto& v : rep.verdicts)
    if (std::find(experiments.begin(), experiments.end(), v.experiment) == experiments.end())
      experiments.push_back(v.experiment);
  for (const auto& e : experiments) {
    text << e << "\n";
    text << "  " << pad("claim", 28) << pad("crit", 6) << pad("verdict", 9) << pad("measured", 22) << "required\n";
    for (const auto& v : rep.verdicts) {
      if (v.experiment != e) continue;
      text << "  " << pad(v.claim, 28) << pad(std::to_string(v.criterion), 6) << pad(v.pass ? "PASS" : "FAIL", 9)
           << pad(v.comparator == "==" ? (v.pass ? "true" : "false") : format_number(v.measured), 22)
           << threshold_text(v) << "   " << v.metric << "\n";
    }
    text << "\n";
  }
  text << "acceptance criteria\n";
  for (const auto& s : rep.criteria) text << "  " << format_criterion(s) << "\n";
  rep.text = text.str();

  std::ofstream out(dir / "report.txt", std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write report.txt in " + dir.string());
  out << rep.text;

  std::ofstream csv(dir / "criteria.csv", std::ios::binary);
  require(static_cast<bool>(csv), ErrorKind::Io, "cannot write criteria.csv in " + dir.string());
  csv << "criterion,name,claims,failed,pass\n";
  for (const auto& s : rep.criteria) {
    std::string failed;
    for (const auto& f : s.failed) failed += (failed.empty() ? "" : " ") + f;
    csv << s.criterion << ",\"" << s.name << "\"," << s.claims << "," << failed << ","
        << (s.pass() ? "true" : "false") << "\n";
  }
  return rep;
}

}  // namespace qsl
