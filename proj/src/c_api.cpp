#include "fastbfgs/fastbfgs.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "fastbfgs/bench.hpp"
#include "fastbfgs/errors.hpp"
#include "fastbfgs/optimizers.hpp"

struct fbfgs_problem {
  fastbfgs::Problem problem;
};

struct fbfgs_bench {
  fastbfgs::BenchSpec spec;
  bool variants_set = false;
  bool memories_set = false;
};

struct fbfgs_report {
  fastbfgs::BenchReport report;
};

namespace {

thread_local std::string last_error;

fbfgs_status fail(fbfgs_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
fbfgs_status guarded(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const fastbfgs::NameError& e) {
    return fail(FBFGS_ERR_NAME, e.what());
  } catch (const fastbfgs::DimensionError& e) {
    return fail(FBFGS_ERR_DIMENSION, e.what());
  } catch (const fastbfgs::CapacityError& e) {
    return fail(FBFGS_ERR_CAPACITY, e.what());
  } catch (const fastbfgs::ConfigError& e) {
    return fail(FBFGS_ERR_CONFIG, e.what());
  } catch (const fastbfgs::Error& e) {
    return fail(FBFGS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FBFGS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FBFGS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FBFGS_ERR_INTERNAL, "unknown error");
  }
}

fbfgs_status null_argument(const char* what) {
  return fail(FBFGS_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

fastbfgs::Variant to_cpp(fbfgs_variant v) {
  switch (v) {
    case FBFGS_GD: return fastbfgs::Variant::gd;
    case FBFGS_BFGS: return fastbfgs::Variant::bfgs;
    case FBFGS_LBFGS: return fastbfgs::Variant::lbfgs;
    case FBFGS_FAST_A: return fastbfgs::Variant::fast_a;
    case FBFGS_FAST_B: return fastbfgs::Variant::fast_b;
  }
  throw fastbfgs::ConfigError("unknown variant code " + std::to_string(static_cast<int>(v)));
}

fbfgs_variant to_c(fastbfgs::Variant v) {
  switch (v) {
    case fastbfgs::Variant::gd: return FBFGS_GD;
    case fastbfgs::Variant::bfgs: return FBFGS_BFGS;
    case fastbfgs::Variant::lbfgs: return FBFGS_LBFGS;
    case fastbfgs::Variant::fast_a: return FBFGS_FAST_A;
    case fastbfgs::Variant::fast_b: return FBFGS_FAST_B;
  }
  return FBFGS_GD;
}

fbfgs_run_status to_c(fastbfgs::RunStatus s) {
  switch (s) {
    case fastbfgs::RunStatus::converged: return FBFGS_CONVERGED;
    case fastbfgs::RunStatus::budget_exhausted: return FBFGS_BUDGET_EXHAUSTED;
    case fastbfgs::RunStatus::line_search_failure: return FBFGS_LINE_SEARCH_FAILURE;
    case fastbfgs::RunStatus::iteration_limit: return FBFGS_ITERATION_LIMIT;
  }
  return FBFGS_LINE_SEARCH_FAILURE;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

fastbfgs::BenchSpec effective_spec(const fbfgs_bench& bench) {
  fastbfgs::BenchSpec spec = bench.spec;
  if (!bench.variants_set) spec.variants = fastbfgs::all_variants();
  if (!bench.memories_set) spec.memories = {8};
  return spec;
}

}  // namespace

extern "C" {

const char* fbfgs_version(void) { return FASTBFGS_VERSION; }

const char* fbfgs_last_error(void) { return last_error.c_str(); }

const char* fbfgs_status_string(fbfgs_status status) {
  switch (status) {
    case FBFGS_OK: return "ok";
    case FBFGS_ERR_NAME: return "unknown name";
    case FBFGS_ERR_DIMENSION: return "dimension error";
    case FBFGS_ERR_CONFIG: return "configuration error";
    case FBFGS_ERR_CAPACITY: return "capacity error";
    case FBFGS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FBFGS_ERR_IO: return "i/o error";
    case FBFGS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void fbfgs_string_free(char* text) { std::free(text); }

size_t fbfgs_problem_count(void) { return fastbfgs::list_problems().size(); }

fbfgs_status fbfgs_problem_info(size_t index, const char** name, size_t* default_dim, int* core) {
  return guarded([&] {
    if (!name) return null_argument("name");
    static const std::vector<fastbfgs::ProblemInfo> infos = fastbfgs::list_problems();
    if (index >= infos.size()) return fail(FBFGS_ERR_INVALID_ARGUMENT, "problem index out of range");
    *name = infos[index].name.c_str();
    if (default_dim) *default_dim = static_cast<size_t>(infos[index].dims.front());
    if (core) *core = infos[index].core ? 1 : 0;
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_problem_create(const char* name, size_t n, fbfgs_problem** out) {
  return guarded([&] {
    if (!name) return null_argument("name");
    if (!out) return null_argument("out");
    const std::string s(name);
    const Eigen::Index dim = n == 0 ? fastbfgs::default_dim(s) : static_cast<Eigen::Index>(n);
    *out = new fbfgs_problem{fastbfgs::get_problem(s, dim)};
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_problem_create_custom(const char* name, size_t n, const double* x0, fbfgs_objective objective,
                                         void* user_data, fbfgs_problem** out) {
  return guarded([&] {
    if (!x0) return null_argument("x0");
    if (!objective) return null_argument("objective");
    if (!out) return null_argument("out");
    if (n == 0) return fail(FBFGS_ERR_DIMENSION, "custom problem needs n > 0");
    const Eigen::Index dim = static_cast<Eigen::Index>(n);
    fastbfgs::ObjectiveFn fn = [objective, user_data, n](const fastbfgs::Vector& x, fastbfgs::Vector& g) {
      return objective(x.data(), g.data(), n, user_data);
    };
    fastbfgs::Vector start = Eigen::Map<const fastbfgs::Vector>(x0, dim);
    *out = new fbfgs_problem{fastbfgs::Problem(name ? name : "custom", dim, std::move(fn), std::move(start))};
    return FBFGS_OK;
  });
}

void fbfgs_problem_destroy(fbfgs_problem* problem) { delete problem; }

size_t fbfgs_problem_dim(const fbfgs_problem* problem) {
  return problem ? static_cast<size_t>(problem->problem.dim()) : 0;
}

fbfgs_status fbfgs_problem_x0(const fbfgs_problem* problem, double* x0, size_t n) {
  return guarded([&] {
    if (!problem) return null_argument("problem");
    if (!x0) return null_argument("x0");
    if (n != static_cast<size_t>(problem->problem.dim())) {
      return fail(FBFGS_ERR_DIMENSION, "x0 buffer length does not match the problem dimension");
    }
    Eigen::Map<fastbfgs::Vector>(x0, problem->problem.dim()) = problem->problem.x0();
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_problem_eval(const fbfgs_problem* problem, const double* x, size_t n, double* f, double* grad) {
  return guarded([&] {
    if (!problem) return null_argument("problem");
    if (!x) return null_argument("x");
    if (!f) return null_argument("f");
    const Eigen::Index dim = problem->problem.dim();
    if (n != static_cast<size_t>(dim)) return fail(FBFGS_ERR_DIMENSION, "x length does not match the problem");
    fastbfgs::Vector g;
    *f = problem->problem.value_and_gradient(Eigen::Map<const fastbfgs::Vector>(x, dim), g);
    if (grad) Eigen::Map<fastbfgs::Vector>(grad, dim) = g;
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_variant_parse(const char* name, fbfgs_variant* out) {
  return guarded([&] {
    if (!name) return null_argument("name");
    if (!out) return null_argument("out");
    try {
      *out = to_c(fastbfgs::parse_variant(name));
    } catch (const fastbfgs::ConfigError& e) {
      return fail(FBFGS_ERR_NAME, e.what());
    }
    return FBFGS_OK;
  });
}

const char* fbfgs_variant_name(fbfgs_variant variant) {
  switch (variant) {
    case FBFGS_GD: return "gd";
    case FBFGS_BFGS: return "bfgs";
    case FBFGS_LBFGS: return "lbfgs";
    case FBFGS_FAST_A: return "fast-a";
    case FBFGS_FAST_B: return "fast-b";
  }
  return "";
}

const char* fbfgs_run_status_name(fbfgs_run_status status) {
  switch (status) {
    case FBFGS_CONVERGED: return "converged";
    case FBFGS_BUDGET_EXHAUSTED: return "budget-exhausted";
    case FBFGS_LINE_SEARCH_FAILURE: return "line-search-failure";
    case FBFGS_ITERATION_LIMIT: return "iteration-limit";
  }
  return "";
}

void fbfgs_options_default(fbfgs_options* options) {
  if (!options) return;
  const fastbfgs::OptimizerConfig d;
  options->variant = to_c(d.variant);
  options->m = d.m;
  options->tol = d.tol;
  options->max_nfg = d.max_nfg;
  options->c1 = d.c1;
  options->c2 = d.c2;
  options->tau_init = d.tau_init;
  options->line_search_max_evals = d.line_search_max_evals;
}

fbfgs_status fbfgs_minimize(const fbfgs_problem* problem, const fbfgs_options* options, double* x_out,
                            fbfgs_result* result) {
  return guarded([&] {
    if (!problem) return null_argument("problem");
    if (!options) return null_argument("options");
    if (!result) return null_argument("result");
    fastbfgs::OptimizerConfig config;
    config.variant = to_cpp(options->variant);
    config.m = options->m;
    config.tol = options->tol;
    config.max_nfg = options->max_nfg;
    config.c1 = options->c1;
    config.c2 = options->c2;
    config.tau_init = options->tau_init;
    config.line_search_max_evals = options->line_search_max_evals;
    const fastbfgs::Trace trace = fastbfgs::minimize(problem->problem, config);
    result->status = to_c(trace.status);
    result->nfg = trace.nfg;
    result->hvp_evals = trace.hvp_evals;
    result->iterations = trace.iterations();
    result->f = trace.final_f();
    result->gnorm = trace.final_gnorm();
    if (x_out) Eigen::Map<fastbfgs::Vector>(x_out, problem->problem.dim()) = trace.final_x;
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_create(fbfgs_bench** out) {
  return guarded([&] {
    if (!out) return null_argument("out");
    *out = new fbfgs_bench{};
    return FBFGS_OK;
  });
}

void fbfgs_bench_destroy(fbfgs_bench* bench) { delete bench; }

fbfgs_status fbfgs_bench_add_problem(fbfgs_bench* bench, const char* request) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    if (!request) return null_argument("request");
    bench->spec.problems.push_back(fastbfgs::parse_problem_request(request));
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_add_variant(fbfgs_bench* bench, const char* name) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    if (!name) return null_argument("name");
    if (!bench->variants_set) bench->spec.variants.clear();
    bench->variants_set = true;
    const std::string s(name);
    std::vector<fastbfgs::Variant> add;
    if (s == "all") {
      add = fastbfgs::all_variants();
    } else {
      try {
        add = {fastbfgs::parse_variant(s)};
      } catch (const fastbfgs::ConfigError& e) {
        return fail(FBFGS_ERR_NAME, e.what());
      }
    }
    for (fastbfgs::Variant v : add) {
      auto& vs = bench->spec.variants;
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    }
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_add_memory(fbfgs_bench* bench, int m) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    if (m < 1) return fail(FBFGS_ERR_CONFIG, "memory m must be at least 1, got " + std::to_string(m));
    if (!bench->memories_set) bench->spec.memories.clear();
    bench->memories_set = true;
    bench->spec.memories.push_back(m);
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_set_tol(fbfgs_bench* bench, double tol) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    if (!(tol > 0.0)) return fail(FBFGS_ERR_CONFIG, "tol must be positive");
    bench->spec.tol = tol;
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_set_max_nfg(fbfgs_bench* bench, long max_nfg) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    if (max_nfg < 1) return fail(FBFGS_ERR_CONFIG, "max-nfg must be at least 1");
    bench->spec.max_nfg = max_nfg;
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_set_jobs(fbfgs_bench* bench, int jobs) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    if (jobs < 1) return fail(FBFGS_ERR_CONFIG, "jobs must be at least 1");
    bench->spec.jobs = jobs;
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_use_preset(fbfgs_bench* bench, const char* preset) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    if (!preset) return null_argument("preset");
    if (std::string(preset) != "paper") return fail(FBFGS_ERR_NAME, "unknown preset '" + std::string(preset) + "'");
    const fastbfgs::BenchSpec p = fastbfgs::paper_preset();
    bench->spec.problems = p.problems;
    bench->spec.variants = p.variants;
    bench->spec.memories = p.memories;
    bench->variants_set = true;
    bench->memories_set = true;
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_validate(const fbfgs_bench* bench) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    fastbfgs::validate(effective_spec(*bench));
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_bench_run(const fbfgs_bench* bench, fbfgs_report** out) {
  return guarded([&] {
    if (!bench) return null_argument("bench");
    if (!out) return null_argument("out");
    *out = new fbfgs_report{fastbfgs::run_suite(effective_spec(*bench))};
    return FBFGS_OK;
  });
}

void fbfgs_report_destroy(fbfgs_report* report) { delete report; }

size_t fbfgs_report_row_count(const fbfgs_report* report) { return report ? report->report.rows.size() : 0; }

fbfgs_status fbfgs_report_row(const fbfgs_report* report, size_t index, const char** problem, size_t* n,
                              fbfgs_variant* variant, int* m, fbfgs_result* result) {
  return guarded([&] {
    if (!report) return null_argument("report");
    if (index >= report->report.rows.size()) return fail(FBFGS_ERR_INVALID_ARGUMENT, "row index out of range");
    const fastbfgs::BenchRow& row = report->report.rows[index];
    if (problem) *problem = row.problem.c_str();
    if (n) *n = static_cast<size_t>(row.n);
    if (variant) *variant = to_c(row.variant);
    if (m) *m = row.m;
    if (result) {
      result->status = to_c(row.status);
      result->nfg = row.nfg;
      result->hvp_evals = 0;
      result->iterations = 0;
      result->f = 0.0;
      result->gnorm = row.gnorm;
    }
    return FBFGS_OK;
  });
}

fbfgs_status fbfgs_report_emit(const fbfgs_report* report, fbfgs_format format, char** text) {
  return guarded([&] {
    if (!report) return null_argument("report");
    if (!text) return null_argument("text");
    if (format != FBFGS_FORMAT_CSV && format != FBFGS_FORMAT_MARKDOWN) {
      return fail(FBFGS_ERR_CONFIG, "unknown output format");
    }
    *text = copy_string(fastbfgs::emit(
        report->report, format == FBFGS_FORMAT_CSV ? fastbfgs::Format::csv : fastbfgs::Format::markdown));
    return FBFGS_OK;
  });
}

}  // extern "C"
