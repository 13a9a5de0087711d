// Runs the acceptance suite and prints one PASS/FAIL line per criterion.
// Usage: qsl_acceptance <config> [output-dir] [--heavy]

#include <iostream>
#include <string>

#include "qsl/config.hpp"
#include "qsl/error.hpp"
#include "qsl/experiments.hpp"
#include "qsl/report.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: qsl_acceptance <config> [output-dir] [--heavy]\n";
    return 1;
  }
  bool heavy = false;
  std::string out_dir;
  for (int i = 2; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--heavy")
      heavy = true;
    else
      out_dir = a;
  }
  try {
    qsl::SuiteConfig suite = qsl::load_suite(argv[1]);
    if (!out_dir.empty()) suite.output_dir = out_dir;
    qsl::run_suite(suite, heavy);
    const qsl::Report rep = qsl::emit_report(suite.output_dir);
    for (const auto& c : rep.criteria) std::cout << qsl::format_criterion(c) << "\n";
    for (const auto& v : rep.verdicts)
      if (!v.pass) std::cout << "  failed " << v.experiment << "/" << v.claim << ": " << v.metric << " = "
                             << qsl::format_number(v.measured) << " (" << v.note << ")\n";
    std::cout << "results in " << suite.output_dir.string() << "\n";
    return rep.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 1;
  }
}
