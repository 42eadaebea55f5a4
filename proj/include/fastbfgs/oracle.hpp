#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fastbfgs/optimizers.hpp"

namespace fastbfgs {

/// Orthonormal basis of the span of the first m rescaled steps, anchored at
/// the starting point of the run that produced them.
struct SubspaceBasis {
  Matrix s_unit;  // n x m, orthonormal columns
  Vector x0;
};

/// Modified Gram-Schmidt with one reorthogonalization pass.
/// Throws RankError when a projected column norm falls below 1e-10 times
/// the largest column norm.
SubspaceBasis schmidt(const Matrix& s, const Vector& x0);

/// One iterate of the reduced BFGS run.
struct XiIterate {
  Vector xi;
  Matrix h;     // inverse Hessian approximation in xi coordinates
  Vector grad;  // gradient in xi coordinates
  double f = 0.0;
  double tau = 0.0;  // step length that produced this iterate (0 for the start)
};

/// Supplies the step length for step k; lets the reduced run follow the
/// step lengths chosen by a full-space run.
using TauProvider = std::function<double(int k)>;

/// Dense BFGS on g(xi) = f(x0 + S xi) with gradient S' grad f. Returns the
/// start plus one entry per step actually taken; stops early when the
/// reduced gradient vanishes or the line search fails. Without a
/// TauProvider the strong Wolfe search of the drivers picks tau.
/// Throws DimensionError on shape mismatch.
std::vector<XiIterate> xi_bfgs(const Problem& problem, const SubspaceBasis& basis, const Vector& xi0,
                               const Matrix& h0_xi, int steps, const TauProvider& tau = {},
                               const LineSearchOptions& options = {});

/// Maximum deviations between a constrained Fast-BFGS run and its reduced
/// BFGS twin, plus the secant and truncation residuals seen along the way.
struct EquivalenceReport {
  std::string problem;
  Eigen::Index n = 0;
  int m = 0;
  int steps_requested = 0;
  int steps_compared = 0;
  double iterate_deviation = 0.0;  // max |x_k - (x0 + S xi_k)|_2
  double h_deviation = 0.0;        // max entrywise |S' H~_k S - H_k^xi|
  double step_deviation = 0.0;     // max | |x_k - x_{k-1}| - |xi_k - xi_{k-1}| |
  double secant_residual = 0.0;    // max |H~_{k+1} y_k - s_k| / |s_k|
  double truncation_residual = 0.0;  // max least-squares residual of the evicted column
  bool rank_ok = true;             // rank H~_k == min(count, m) at every step
  int attempts = 1;                // runs needed to obtain a full-rank seed

  double max_deviation() const;
  std::string to_text() const;
  std::string to_json() const;
};

/// Options of the lockstep check.
struct EquivalenceOptions {
  Variant seed_variant = Variant::fast_a;
  /// Gradient norm, relative to the norm at the end of the seeding phase,
  /// below which comparison stops: beyond it the difference quotients
  /// inside both updates are dominated by rounding.
  double relative_floor = 1e-6;
  /// Extra attempts with a jittered start when the seed is rank deficient.
  int max_retries = 5;
  /// Evict whichever stored column keeps the memory best conditioned
  /// instead of always the oldest one. The steps of a constrained run
  /// tend to line up, and without this the factored form S~ L~ S~' loses
  /// accuracy long before H~ itself does.
  bool reorder_eviction = true;
  /// Materialize H~ and check its rank at every step (n <= 200 only).
  bool check_rank = true;
  unsigned jitter_seed = 12345;
};

/// Runs Fast-BFGS with the correction active for the first m steps and
/// disabled afterwards, builds the basis from the m seeded steps, then runs
/// xi_bfgs from xi_m = S'(x_m - x0), H_m^xi = S' H~_m S with the same step
/// lengths and compares for `steps` further steps.
/// Throws RankError if no full-rank seed is found.
EquivalenceReport check_equivalence(const Problem& problem, int m, int steps,
                                    const EquivalenceOptions& options = {});

/// |apply(state, y) - s|_2 / |s|_2.
double check_secant(const SubspaceState& state, const Vector& s, const Vector& y);

/// Numerical rank from singular values, relative tolerance `rel_tol`.
int numerical_rank(const Matrix& a, double rel_tol = 1e-10);

/// Dense S~ L~ S~' (tests only; O(n^2) memory).
Matrix materialize(const SubspaceState& state);

}  // namespace fastbfgs
