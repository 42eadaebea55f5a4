#include "fastbfgs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "fastbfgs/errors.hpp"

namespace fastbfgs {

namespace {

const char* const kCsvHeader = "problem,n,variant,m,nfg,status,gnorm,seconds";

bool parse_long(std::string_view text, long& out) {
  if (text.empty()) return false;
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  out = v;
  return true;
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  out = v;
  return true;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits CSV text into records of fields (RFC 4180, CRLF or LF endings).
std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (field_started || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw ConfigError("csv: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Task {
  std::size_t problem;
  Variant variant;
  int m;
};

Eigen::Index resolved_dim(const ProblemRequest& req) { return req.n > 0 ? req.n : default_dim(req.name); }

}  // namespace

ProblemRequest parse_problem_request(std::string_view text) {
  ProblemRequest req;
  const auto at = text.find('@');
  req.name = std::string(text.substr(0, at));
  if (req.name.empty()) throw ConfigError("problem request '" + std::string(text) + "' has no name");
  if (at != std::string_view::npos) {
    long n = 0;
    if (!parse_long(text.substr(at + 1), n) || n <= 0) {
      throw ConfigError("problem request '" + std::string(text) + "' needs a positive dimension after '@'");
    }
    req.n = n;
  }
  return req;
}

std::vector<Variant> all_variants() {
  return {Variant::gd, Variant::bfgs, Variant::lbfgs, Variant::fast_a, Variant::fast_b};
}

BenchSpec paper_preset() {
  BenchSpec spec;
  for (const ProblemInfo& info : list_problems()) {
    if (info.core) spec.problems.push_back({info.name, info.dims.front()});
  }
  spec.variants = all_variants();
  spec.memories = {8};
  return spec;
}

void validate(const BenchSpec& spec) {
  if (!(spec.tol > 0.0)) throw ConfigError("tol must be positive");
  if (spec.max_nfg < 1) throw ConfigError("max-nfg must be at least 1");
  if (spec.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (spec.memories.empty()) throw ConfigError("at least one memory size is required");
  for (int m : spec.memories) {
    if (m < 1) throw ConfigError("memory m must be at least 1, got " + std::to_string(m));
  }
  const long dense_limit = OptimizerConfig{}.dense_limit;
  for (const ProblemRequest& req : spec.problems) {
    const Eigen::Index n = resolved_dim(req);
    get_problem(req.name, n);  // throws NameError / DimensionError
    for (Variant v : spec.variants) {
      if (v == Variant::bfgs && n > dense_limit) {
        throw CapacityError("bfgs on " + req.name + "@" + std::to_string(n) + " exceeds the dense limit n <= " +
                            std::to_string(dense_limit));
      }
    }
  }
}

int resolve_jobs(int requested) {
  if (const char* env = std::getenv("SUBSPACE_BENCH_THREADS")) {
    long v = 0;
    if (parse_long(env, v) && v > 0) return static_cast<int>(v);
  }
  return requested < 1 ? 1 : requested;
}

BenchReport run_suite(const BenchSpec& spec) {
  validate(spec);
  BenchReport report;
  report.tol = spec.tol;
  report.max_nfg = spec.max_nfg;
  report.version = FASTBFGS_VERSION;
  report.timestamp = utc_timestamp();

  std::vector<Task> tasks;
  for (std::size_t p = 0; p < spec.problems.size(); ++p) {
    for (int m : spec.memories) {
      for (Variant v : spec.variants) tasks.push_back({p, v, m});
    }
  }
  report.rows.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& task = tasks[i];
        const ProblemRequest& req = spec.problems[task.problem];
        const Problem problem = get_problem(req.name, resolved_dim(req));
        OptimizerConfig config;
        config.variant = task.variant;
        config.m = task.m;
        config.tol = spec.tol;
        config.max_nfg = spec.max_nfg;
        const auto start = std::chrono::steady_clock::now();
        const Trace trace = minimize(problem, config);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        report.rows[i] = {req.name,     problem.dim(), task.variant,        task.m,
                          trace.nfg,    trace.status,  trace.final_gnorm(), elapsed.count()};
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int jobs = std::min<int>(resolve_jobs(spec.jobs), static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "markdown") return Format::markdown;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected csv or markdown)");
}

RunStatus parse_status(std::string_view name) {
  for (RunStatus s : {RunStatus::converged, RunStatus::budget_exhausted, RunStatus::line_search_failure,
                      RunStatus::iteration_limit}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown run status '" + std::string(name) + "'");
}

std::string emit_csv(const BenchReport& report) {
  std::ostringstream os;
  os << kCsvHeader << "\r\n";
  for (const BenchRow& r : report.rows) {
    os << csv_field(r.problem) << ',' << r.n << ',' << to_string(r.variant) << ',' << r.m << ',' << r.nfg << ','
       << to_string(r.status) << ',' << format_double(r.gnorm) << ',' << format_double(r.seconds) << "\r\n";
  }
  return os.str();
}

std::vector<BenchRow> parse_csv(std::string_view text) {
  const auto records = split_csv(text);
  if (records.empty()) throw ConfigError("csv: missing header");
  std::string header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header += (i ? "," : "") + records[0][i];
  if (header != kCsvHeader) throw ConfigError("csv: unexpected header '" + header + "'");

  std::vector<BenchRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    const std::string where = "csv line " + std::to_string(i + 1);
    if (f.size() != 8) throw ConfigError(where + ": expected 8 fields");
    BenchRow r;
    long n = 0, m = 0;
    r.problem = f[0];
    if (!parse_long(f[1], n) || !parse_long(f[3], m) || !parse_long(f[4], r.nfg) ||
        !parse_double(f[6], r.gnorm) || !parse_double(f[7], r.seconds)) {
      throw ConfigError(where + ": malformed number");
    }
    r.n = n;
    r.m = static_cast<int>(m);
    r.variant = parse_variant(f[2]);
    r.status = parse_status(f[5]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string emit_markdown(const BenchReport& report) {
  auto label = [](const BenchRow& r) {
    std::string s(to_string(r.variant));
    if (uses_memory(r.variant)) s += " (m=" + std::to_string(r.m) + ")";
    return s;
  };
  auto cell = [&](const BenchRow& r) {
    switch (r.status) {
      case RunStatus::converged: return std::to_string(r.nfg);
      case RunStatus::budget_exhausted: return ">" + std::to_string(report.max_nfg);
      default: return std::string("--");
    }
  };

  std::vector<std::string> columns;
  std::vector<std::pair<std::string, Eigen::Index>> lines;
  std::map<std::pair<std::pair<std::string, Eigen::Index>, std::string>, std::string> cells;
  for (const BenchRow& r : report.rows) {
    const std::string col = label(r);
    if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
    const auto key = std::make_pair(r.problem, r.n);
    if (std::find(lines.begin(), lines.end(), key) == lines.end()) lines.push_back(key);
    cells.emplace(std::make_pair(key, col), cell(r));
  }

  std::ostringstream os;
  char tol[32];
  std::snprintf(tol, sizeof tol, "%g", report.tol);
  os << "<!-- fastbfgs " << report.version << ", tol " << tol << ", max nfg " << report.max_nfg << ", "
     << report.timestamp << " -->\n";
  os << "| Problem | n |";
  for (const auto& c : columns) os << ' ' << c << " |";
  os << "\n|---|---:|";
  for (std::size_t i = 0; i < columns.size(); ++i) os << "---:|";
  os << '\n';
  for (const auto& key : lines) {
    os << "| " << key.first << " | " << key.second << " |";
    for (const auto& c : columns) {
      const auto it = cells.find(std::make_pair(key, c));
      os << ' ' << (it == cells.end() ? std::string() : it->second) << " |";
    }
    os << '\n';
  }
  return os.str();
}

std::string emit(const BenchReport& report, Format format) {
  return format == Format::csv ? emit_csv(report) : emit_markdown(report);
}

}  // namespace fastbfgs
