/* C interface of the fastbfgs library.
 *
 * Objects are opaque handles created and destroyed through this API.
 * Every fallible function returns an fbfgs_status; on failure a message
 * describing the last error of the calling thread is available from
 * fbfgs_last_error(). Strings returned through char** outputs are owned
 * by the caller and released with fbfgs_string_free().
 */
#ifndef FASTBFGS_FASTBFGS_H
#define FASTBFGS_FASTBFGS_H

#include <stddef.h>

#if defined(FASTBFGS_BUILDING_LIBRARY)
#define FBFGS_API __attribute__((visibility("default")))
#else
#define FBFGS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fbfgs_status {
  FBFGS_OK = 0,
  FBFGS_ERR_NAME = 1,             /* unknown problem or variant name */
  FBFGS_ERR_DIMENSION = 2,        /* dimension rejected or mismatched */
  FBFGS_ERR_CONFIG = 3,           /* invalid option value */
  FBFGS_ERR_CAPACITY = 4,         /* dense BFGS asked for a too large n */
  FBFGS_ERR_INVALID_ARGUMENT = 5, /* null pointer or similar misuse */
  FBFGS_ERR_IO = 6,
  FBFGS_ERR_INTERNAL = 7
} fbfgs_status;

typedef enum fbfgs_variant {
  FBFGS_GD = 0,
  FBFGS_BFGS = 1,
  FBFGS_LBFGS = 2,
  FBFGS_FAST_A = 3,
  FBFGS_FAST_B = 4
} fbfgs_variant;

typedef enum fbfgs_run_status {
  FBFGS_CONVERGED = 0,
  FBFGS_BUDGET_EXHAUSTED = 1,
  FBFGS_LINE_SEARCH_FAILURE = 2,
  FBFGS_ITERATION_LIMIT = 3
} fbfgs_run_status;

typedef enum fbfgs_format { FBFGS_FORMAT_CSV = 0, FBFGS_FORMAT_MARKDOWN = 1 } fbfgs_format;

typedef struct fbfgs_problem fbfgs_problem;
typedef struct fbfgs_bench fbfgs_bench;
typedef struct fbfgs_report fbfgs_report;

typedef struct fbfgs_options {
  fbfgs_variant variant;
  int m;           /* memory size for lbfgs, fast-a, fast-b */
  double tol;      /* stop when the gradient norm drops below tol */
  long max_nfg;    /* budget of function-and-gradient evaluations */
  double c1;       /* sufficient decrease constant */
  double c2;       /* curvature constant */
  double tau_init; /* first trial step length */
  int line_search_max_evals;
} fbfgs_options;

typedef struct fbfgs_result {
  fbfgs_run_status status;
  long nfg;        /* all evaluations, Hessian-vector products included */
  long hvp_evals;  /* part of nfg spent on Hessian-vector products */
  long iterations;
  double f;
  double gnorm;
} fbfgs_result;

/* f(x), writing the gradient into grad (length n). */
typedef double (*fbfgs_objective)(const double* x, double* grad, size_t n, void* user_data);

FBFGS_API const char* fbfgs_version(void);
/* Message of the last failed call on this thread ("" if none). */
FBFGS_API const char* fbfgs_last_error(void);
FBFGS_API const char* fbfgs_status_string(fbfgs_status status);
FBFGS_API void fbfgs_string_free(char* text);

/* Registered problems. */
FBFGS_API size_t fbfgs_problem_count(void);
/* name points to static storage; default_dim and core may be null. */
FBFGS_API fbfgs_status fbfgs_problem_info(size_t index, const char** name, size_t* default_dim, int* core);

/* n = 0 selects the default dimension. */
FBFGS_API fbfgs_status fbfgs_problem_create(const char* name, size_t n, fbfgs_problem** out);
/* A user objective; x0 (length n) is copied. The callback must stay valid
 * for the lifetime of the handle and must be safe to call concurrently if
 * the handle is shared between threads. */
FBFGS_API fbfgs_status fbfgs_problem_create_custom(const char* name, size_t n, const double* x0,
                                                   fbfgs_objective objective, void* user_data,
                                                   fbfgs_problem** out);
FBFGS_API void fbfgs_problem_destroy(fbfgs_problem* problem);
FBFGS_API size_t fbfgs_problem_dim(const fbfgs_problem* problem);
FBFGS_API fbfgs_status fbfgs_problem_x0(const fbfgs_problem* problem, double* x0, size_t n);
/* grad may be null. */
FBFGS_API fbfgs_status fbfgs_problem_eval(const fbfgs_problem* problem, const double* x, size_t n, double* f,
                                          double* grad);

FBFGS_API fbfgs_status fbfgs_variant_parse(const char* name, fbfgs_variant* out);
FBFGS_API const char* fbfgs_variant_name(fbfgs_variant variant);
FBFGS_API const char* fbfgs_run_status_name(fbfgs_run_status status);

FBFGS_API void fbfgs_options_default(fbfgs_options* options);
/* x_out (length dim, may be null) receives the final iterate. */
FBFGS_API fbfgs_status fbfgs_minimize(const fbfgs_problem* problem, const fbfgs_options* options, double* x_out,
                                      fbfgs_result* result);

/* Benchmark grids. */
FBFGS_API fbfgs_status fbfgs_bench_create(fbfgs_bench** out);
FBFGS_API void fbfgs_bench_destroy(fbfgs_bench* bench);
/* "NAME" or "NAME@N". */
FBFGS_API fbfgs_status fbfgs_bench_add_problem(fbfgs_bench* bench, const char* request);
/* A variant name or "all". */
FBFGS_API fbfgs_status fbfgs_bench_add_variant(fbfgs_bench* bench, const char* name);
FBFGS_API fbfgs_status fbfgs_bench_add_memory(fbfgs_bench* bench, int m);
FBFGS_API fbfgs_status fbfgs_bench_set_tol(fbfgs_bench* bench, double tol);
FBFGS_API fbfgs_status fbfgs_bench_set_max_nfg(fbfgs_bench* bench, long max_nfg);
FBFGS_API fbfgs_status fbfgs_bench_set_jobs(fbfgs_bench* bench, int jobs);
/* Replaces problems, variants and memories with a named grid ("paper"). */
FBFGS_API fbfgs_status fbfgs_bench_use_preset(fbfgs_bench* bench, const char* preset);
/* Checks the grid without running it. Unset variants default to all,
 * unset memories to m = 8. */
FBFGS_API fbfgs_status fbfgs_bench_validate(const fbfgs_bench* bench);
FBFGS_API fbfgs_status fbfgs_bench_run(const fbfgs_bench* bench, fbfgs_report** out);

FBFGS_API void fbfgs_report_destroy(fbfgs_report* report);
FBFGS_API size_t fbfgs_report_row_count(const fbfgs_report* report);
/* problem points into the report and lives as long as it does. */
FBFGS_API fbfgs_status fbfgs_report_row(const fbfgs_report* report, size_t index, const char** problem, size_t* n,
                                        fbfgs_variant* variant, int* m, fbfgs_result* result);
FBFGS_API fbfgs_status fbfgs_report_emit(const fbfgs_report* report, fbfgs_format format, char** text);

#ifdef __cplusplus
}
#endif

#endif /* FASTBFGS_FASTBFGS_H */
