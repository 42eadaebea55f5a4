#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fastbfgs/optimizers.hpp"

namespace fastbfgs {

/// A problem name with an optional dimension; n = 0 selects the default.
struct ProblemRequest {
  std::string name;
  Eigen::Index n = 0;
};

/// Parses "NAME" or "NAME@N". Throws ConfigError on malformed input.
ProblemRequest parse_problem_request(std::string_view text);

/// A benchmark grid: every problem is run with every variant and memory.
struct BenchSpec {
  std::vector<ProblemRequest> problems;
  std::vector<Variant> variants;
  std::vector<int> memories{8};
  double tol = 1e-5;
  long max_nfg = 1000;
  int jobs = 1;
};

/// The fourteen core problems at their table dimensions, all variants, m = 8.
BenchSpec paper_preset();

/// All variants in table order.
std::vector<Variant> all_variants();

struct BenchRow {
  std::string problem;
  Eigen::Index n = 0;
  Variant variant = Variant::gd;
  int m = 0;
  long nfg = 0;
  RunStatus status = RunStatus::converged;
  double gnorm = 0.0;
  double seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double tol = 1e-5;
  long max_nfg = 1000;
  std::string version;
  std::string timestamp;  // UTC, ISO 8601
};

/// Resolves every problem and checks every option; throws ConfigError,
/// NameError, DimensionError or CapacityError before anything runs.
void validate(const BenchSpec& spec);

/// Worker count: SUBSPACE_BENCH_THREADS when set to a positive integer,
/// otherwise `requested`, and at least 1.
int resolve_jobs(int requested);

/// Runs the grid, problems outermost, then memories, then variants. Rows
/// come back in that order whatever the number of workers. Validates first.
BenchReport run_suite(const BenchSpec& spec);

enum class Format { csv, markdown };

/// Throws ConfigError for anything but "csv" and "markdown".
Format parse_format(std::string_view name);

/// CSV with header problem,n,variant,m,nfg,status,gnorm,seconds.
std::string emit_csv(const BenchReport& report);

/// Pipe table with one line per (problem, n) and one column per variant
/// and memory; ">budget" marks budget exhaustion and "--" any other failure.
std::string emit_markdown(const BenchReport& report);

std::string emit(const BenchReport& report, Format format);

/// Reads emit_csv output back. Throws ConfigError on malformed input.
std::vector<BenchRow> parse_csv(std::string_view text);

/// Inverse of to_string(RunStatus); throws ConfigError.
RunStatus parse_status(std::string_view name);

}  // namespace fastbfgs
