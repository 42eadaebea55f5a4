#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fastbfgs/correction.hpp"
#include "fastbfgs/line_search.hpp"
#include "fastbfgs/problems.hpp"
#include "fastbfgs/subspace.hpp"

namespace fastbfgs {

enum class Variant { gd, bfgs, lbfgs, fast_a, fast_b };

/// "gd", "bfgs", "lbfgs", "fast-a", "fast-b".
std::string_view to_string(Variant v);
/// Inverse of to_string; throws ConfigError on anything else.
Variant parse_variant(std::string_view name);
/// True for variants whose behaviour depends on the memory size m.
bool uses_memory(Variant v);

struct OptimizerConfig {
  Variant variant = Variant::fast_a;
  int m = 8;
  double tol = 1e-5;
  long max_nfg = 1000;
  double c1 = 1e-4;
  double c2 = 0.9;
  double tau_init = 1.0;
  int line_search_max_evals = 60;
  /// Fast-BFGS only: force alpha = 0, which keeps iterates inside the
  /// subspace spanned by the stored steps.
  bool constrained_mode = false;
  /// With constrained_mode, the number of leading iterations that still use
  /// the correction (so the memory can fill up with independent steps).
  int free_iterations = 0;
  /// Fast-BFGS only: before each truncated update, move the stored column
  /// that best keeps the memory well conditioned into the evicted slot.
  /// Meant for constrained runs, where every stored column lies in the
  /// span of the others plus the new step, so H~ is unaffected in exact
  /// arithmetic. Off in normal use.
  bool reorder_eviction = false;
  /// Dense BFGS refuses n above this.
  long dense_limit = 4096;
  /// Stop after this many accepted steps; negative means no limit.
  long max_iterations = -1;

  /// Throws ConfigError unless 0 < c1 < c2 < 1, m >= 1, tol > 0, max_nfg >= 1.
  void validate() const;
  LineSearchOptions line_search() const { return {c1, c2, tau_init, line_search_max_evals}; }
};

enum class RunStatus { converged, budget_exhausted, line_search_failure, iteration_limit };

std::string_view to_string(RunStatus s);

/// One accepted iterate. tau and alpha belong to the step that produced x_k
/// (both zero for k = 0); nfg is cumulative after x_k was evaluated.
struct IterateRecord {
  long k = 0;
  double f = 0.0;
  double gnorm = 0.0;
  double tau = 0.0;
  double alpha = 0.0;
  long nfg = 0;
};

struct Trace {
  std::vector<IterateRecord> iterates;
  Vector final_x;
  RunStatus status = RunStatus::line_search_failure;
  /// Total evaluations consumed, including any spent after the last
  /// accepted iterate.
  long nfg = 0;
  /// Part of nfg spent on Hessian-vector products for the correction term.
  long hvp_evals = 0;

  double final_f() const { return iterates.back().f; }
  double final_gnorm() const { return iterates.back().gnorm; }
  long iterations() const { return static_cast<long>(iterates.size()) - 1; }
};

/// Fast-BFGS progress report, emitted after every accepted step once the
/// curvature pair has been handled. `state` already contains the new pair.
struct IterationView {
  long k;  // index of the step just taken (x_k -> x_{k+1})
  const Vector& x_prev;
  const Vector& x;
  const Vector& g;
  double tau;
  const Vector& s;  // tau times the search direction
  const Vector& y;  // g_{k+1} - g_k
  const Correction& correction;
  const SubspaceState& state;
  /// Null when the pair was skipped for lack of curvature.
  const AbsorbInfo* absorb;
};

using Observer = std::function<void(const IterationView&)>;

/// Fast-BFGS: subspace quasi-Newton direction -S~ L~ S~' g plus the
/// ver-A / ver-B escape term. Iteration 0 is a steepest-descent step; the
/// memory grows with the exact BFGS recursion until it holds m steps and is
/// truncated afterwards.
Trace fast_bfgs(const Problem& problem, const OptimizerConfig& config, const Observer& observer = {});

/// Dense inverse-Hessian BFGS with H0 = I. Throws CapacityError when
/// n > config.dense_limit.
Trace bfgs(const Problem& problem, const OptimizerConfig& config);

/// Two-loop L-BFGS with the usual s'y / y'y initial scaling.
Trace lbfgs(const Problem& problem, const OptimizerConfig& config);

/// Steepest descent.
Trace gd(const Problem& problem, const OptimizerConfig& config);

/// Dispatches on config.variant.
Trace minimize(const Problem& problem, const OptimizerConfig& config);

/// H <- (I - rho s y') H (I - rho y s') + rho s s', rho = 1 / s'y.
/// Returns false (H unchanged) when s'y <= kCurvatureSkipRatio |s| |y|.
bool bfgs_inverse_update(Matrix& h, const Vector& s, const Vector& y);

/// H g by the two-loop recursion over pairs stored oldest first, with
/// initial matrix gamma I.
Vector two_loop(const std::vector<Vector>& s, const std::vector<Vector>& y, const Vector& g, double gamma);

}  // namespace fastbfgs
