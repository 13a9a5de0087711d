#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "qsl/calibrate.hpp"
#include "qsl/config.hpp"
#include "qsl/error.hpp"
#include "qsl/experiments.hpp"
#include "qsl/report.hpp"
#include "qsl/thread_pool.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitOperational = 1;
constexpr int kExitFail = 2;

int cmd_run(const std::filesystem::path& config, bool heavy, int threads) {
  qsl::SuiteConfig suite = qsl::load_suite(config);
  if (threads > 0) suite.threads = threads;
  const qsl::SuiteOutcome out = qsl::run_suite(suite, heavy);
  const qsl::Report rep = qsl::emit_report(suite.output_dir);
  std::cout << rep.text;
  for (const auto& f : out.failed) std::cerr << "failed: " << f << "\n";
  std::cout << "results in " << suite.output_dir.string() << "\n";
  return out.all_pass ? kExitPass : kExitFail;
}

int cmd_calibrate(int kmax, int threads) {
  qsl::require(kmax >= 8, qsl::ErrorKind::ConfigValidation, "--kmax must be at least 8");
  const std::vector<int> ks = {kmax / 4, kmax / 2, kmax};
  qsl::ThreadPool pool(qsl::resolve_thread_count(threads));
  const qsl::CalibrationRecord rec = qsl::calibrate_constants(ks, qsl::default_battery(), 1.5, &pool);
  std::cout << qsl::format_calibration(rec);
  return kExitPass;
}

int cmd_report(const std::filesystem::path& dir) {
  const qsl::Report rep = qsl::emit_report(dir);
  std::cout << rep.text;
  bool pass = true;
  for (const auto& v : rep.verdicts) pass = pass && v.pass;
  return pass ? kExitPass : kExitFail;
}

int cmd_list() {
  for (const auto& e : qsl::experiment_registry()) {
    std::cout << e.id << "  " << e.description << "\n";
    for (const auto& c : e.claims) std::cout << "    " << c.id << " (criterion " << c.criterion << ")  " << c.statement << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berezin-Toeplitz quantization lab on the two-sphere"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: QSL_THREADS or hardware concurrency)");

  std::filesystem::path config;
  bool heavy = false;
  auto* run = app.add_subcommand("run", "Run the experiments of a suite config and write results");
  run->add_option("--config", config, "Suite config file")->required()->check(CLI::ExistingFile);
  run->add_flag("--heavy", heavy, "Enable heavy sweeps (k up to 1024)");

  int kmax = 128;
  auto* cal = app.add_subcommand("calibrate", "Fit the quantization constants on k = kmax/4, kmax/2, kmax");
  cal->add_option("--kmax", kmax, "Largest k")->required();

  std::filesystem::path dir;
  auto* rep = app.add_subcommand("report", "Summarize a results directory");
  rep->add_option("--dir", dir, "Results directory")->required();

  app.add_subcommand("list", "List experiments and the claims they test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitOperational;
  }

  try {
    if (*run) return cmd_run(config, heavy, threads);
    if (*cal) return cmd_calibrate(kmax, threads);
    if (*rep) return cmd_report(dir);
    return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "qsl: " << e.what() << "\n";
  }
  return kExitOperational;
}
