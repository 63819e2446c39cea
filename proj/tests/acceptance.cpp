// Runs the acceptance criteria on the shipped HEIS(2,1) config and prints one
// line per criterion. Usage: acceptance <config.json> <scratch-dir>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "heatfock/cli.hpp"
#include "heatfock/io.hpp"
#include "heatfock/suite.hpp"

using namespace heatfock;

namespace {

const char* const kTitles[] = {
    "",
    "exact Taylor isometry (k=2,d=1 and k=3,d=2)",
    "worked value |c1|^2 by Fock sum, heat oracle and MC",
    "mean-value property of heat_mc",
    "skeleton reproduction on a 10-point grid",
    "Ito isometry and cross-rank orthogonality",
    "chaos residual rate and 2048-step bound",
    "algebraic identity suite",
    "grading invariance and Fejer truncation",
    "projection convergence",
    "Bargmann and Gaussian bound sweeps",
};

// CSV without comment lines.
std::string body(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out += line + '\n';
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance <config.json> <scratch-dir>\n");
    return 2;
  }
  const std::string config_path = argv[1];
  const std::string scratch = argv[2];
  const ExperimentConfig cfg = load_config(config_path);
  SuiteOptions opts;
  opts.group = cfg.group;
  opts.T = cfg.T;
  opts.seed = cfg.mc.seed;
  opts.workers = 1;
  opts.path_scale = cfg.path_scale;

  int failed = 0;
  std::vector<CheckRow> all;
  for (const auto& check : suite_checks()) {
    const auto start = std::chrono::steady_clock::now();
    const auto rows = check.run(opts);
    const bool ok = all_pass(rows);
    failed += !ok;
    std::printf("criterion %2d %s  %s (%zu rows, %.1f s)\n", check.id, ok ? "PASS" : "FAIL",
                kTitles[check.id], rows.size(), seconds_since(start));
    for (const auto& r : rows) {
      if (r.pass) continue;
      std::printf("    failing row %s: target %s estimate %s stderr %s\n", r.experiment.c_str(),
                  format_target(r.target).c_str(), format_target(r.estimate).c_str(),
                  format_number(r.stderr).c_str());
    }
    std::fflush(stdout);
    all.insert(all.end(), rows.begin(), rows.end());
  }

  // The first run used one worker in-process; verify-all runs again through
  // the command line with two workers and must reproduce the body byte for byte.
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream first;
  write_rows_csv(first, all, config_hash(cfg));
  const std::string out_path = scratch + "/acceptance_verify_all.csv";
  const char* cli_argv[] = {"heatfock", "verify-all", "--config", config_path.c_str(),
                            "--workers", "2",          "--out",    out_path.c_str()};
  const int status = run_cli(8, cli_argv);
  const bool same = body(slurp(out_path)) == first.str();
  const bool ok = same && status == 0;
  failed += !ok;
  std::printf("criterion 11 %s  reproducibility: verify-all CSV body identical across runs and "
              "worker counts (exit %d, %s, %.1f s)\n",
              ok ? "PASS" : "FAIL", status, same ? "identical" : "DIFFERENT",
              seconds_since(start));
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
