// Benchmark driver: runs a grid of problems and optimizers through the C
// library and prints the evaluation counts as CSV or a Markdown table.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fastbfgs/fastbfgs.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 1;

int report_error(fbfgs_status status) {
  std::cerr << "fbfgs_bench: " << fbfgs_status_string(status) << ": " << fbfgs_last_error() << '\n';
  const bool config = status == FBFGS_ERR_NAME || status == FBFGS_ERR_DIMENSION || status == FBFGS_ERR_CONFIG ||
                      status == FBFGS_ERR_CAPACITY;
  return config ? kExitConfig : kExitRuntime;
}

void list_problems() {
  std::cout << "problem,default_n,core\n";
  for (size_t i = 0; i < fbfgs_problem_count(); ++i) {
    const char* name = nullptr;
    size_t n = 0;
    int core = 0;
    if (fbfgs_problem_info(i, &name, &n, &core) == FBFGS_OK) {
      std::cout << name << ',' << n << ',' << (core ? "yes" : "no") << '\n';
    }
  }
}

struct BenchHandle {
  fbfgs_bench* ptr = nullptr;
  ~BenchHandle() { fbfgs_bench_destroy(ptr); }
};

struct ReportHandle {
  fbfgs_report* ptr = nullptr;
  ~ReportHandle() { fbfgs_report_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run a benchmark grid of quasi-Newton optimizers"};
  app.set_version_flag("--version", std::string(fbfgs_version()));

  std::vector<std::string> problems;
  std::vector<std::string> variants;
  std::vector<int> memories;
  double tol = 1e-5;
  long max_nfg = 1000;
  std::string format = "csv";
  std::string out_path;
  int jobs = 1;
  std::string preset;
  bool list = false;

  app.add_option("-p,--problem", problems, "Problem as NAME or NAME@N (repeatable)");
  app.add_option("-v,--variant", variants, "gd, bfgs, lbfgs, fast-a, fast-b or all (repeatable; default all)");
  app.add_option("-m,--m", memories, "Memory size (repeatable; default 8)");
  app.add_option("--tol", tol, "Stop when the gradient norm falls below this");
  app.add_option("--max-nfg", max_nfg, "Evaluation budget per run");
  app.add_option("-f,--format", format, "Output format: csv or markdown");
  app.add_option("-o,--out", out_path, "Write the table to this file instead of stdout");
  app.add_option("-j,--jobs", jobs, "Worker threads (SUBSPACE_BENCH_THREADS overrides)");
  app.add_option("--preset", preset, "Named grid; 'paper' runs every core problem with every variant at m=8");
  app.add_flag("--list", list, "List the registered problems and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (list) {
    list_problems();
    return 0;
  }

  fbfgs_format fmt;
  if (format == "csv") {
    fmt = FBFGS_FORMAT_CSV;
  } else if (format == "markdown") {
    fmt = FBFGS_FORMAT_MARKDOWN;
  } else {
    std::cerr << "fbfgs_bench: unknown format '" << format << "' (expected csv or markdown)\n";
    return kExitConfig;
  }

  BenchHandle bench;
  fbfgs_status st = fbfgs_bench_create(&bench.ptr);
  if (st != FBFGS_OK) return report_error(st);

  if (!preset.empty() && (st = fbfgs_bench_use_preset(bench.ptr, preset.c_str())) != FBFGS_OK) {
    return report_error(st);
  }
  for (const auto& p : problems) {
    if ((st = fbfgs_bench_add_problem(bench.ptr, p.c_str())) != FBFGS_OK) return report_error(st);
  }
  for (const auto& v : variants) {
    if ((st = fbfgs_bench_add_variant(bench.ptr, v.c_str())) != FBFGS_OK) return report_error(st);
  }
  for (int m : memories) {
    if ((st = fbfgs_bench_add_memory(bench.ptr, m)) != FBFGS_OK) return report_error(st);
  }
  if ((st = fbfgs_bench_set_tol(bench.ptr, tol)) != FBFGS_OK) return report_error(st);
  if ((st = fbfgs_bench_set_max_nfg(bench.ptr, max_nfg)) != FBFGS_OK) return report_error(st);
  if ((st = fbfgs_bench_set_jobs(bench.ptr, jobs)) != FBFGS_OK) return report_error(st);

  if ((st = fbfgs_bench_validate(bench.ptr)) != FBFGS_OK) return report_error(st);

  ReportHandle report;
  if ((st = fbfgs_bench_run(bench.ptr, &report.ptr)) != FBFGS_OK) return report_error(st);

  char* text = nullptr;
  if ((st = fbfgs_report_emit(report.ptr, fmt, &text)) != FBFGS_OK) return report_error(st);
  const std::string output(text);
  fbfgs_string_free(text);

  if (out_path.empty()) {
    std::cout << output;
  } else {
    std::ofstream file(out_path, std::ios::binary);
    file << output;
    if (!file) {
      std::cerr << "fbfgs_bench: cannot write " << out_path << '\n';
      return kExitRuntime;
    }
  }
  return 0;
}
