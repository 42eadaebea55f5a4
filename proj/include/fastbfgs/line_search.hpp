#pragma once

#include <functional>

namespace fastbfgs {

/// Value and slope of the line restriction phi(tau) = f(x + tau p).
struct LinePoint {
  double value = 0.0;
  double slope = 0.0;
};

/// One call evaluates f and its gradient together and counts as a single
/// function-and-gradient evaluation.
using LineFunction = std::function<LinePoint(double tau)>;

enum class LineSearchStatus { converged, max_evals, degenerate_direction };

struct LineSearchOptions {
  double c1 = 1e-4;
  double c2 = 0.9;
  double tau_init = 1.0;
  int max_evals = 60;
};

struct LineSearchResult {
  double tau = 0.0;
  /// phi at tau; only meaningful when tau > 0.
  LinePoint point;
  int nfg_used = 0;
  LineSearchStatus status = LineSearchStatus::max_evals;
};

/// Strong Wolfe step selection: bracketing phase followed by a zoom that
/// uses safeguarded cubic interpolation.
///
/// On success the returned tau satisfies
///   phi(tau) <= phi(0) + c1 tau phi'(0)   and   |phi'(tau)| <= c2 |phi'(0)|,
/// and tau is always the last point handed to phi, so callers can reuse
/// whatever they cached during that evaluation. A non-ascent start
/// (phi'(0) >= 0) returns degenerate_direction without evaluating phi.
/// Non-finite trial values are treated as overshooting.
LineSearchResult strong_wolfe(const LineFunction& phi, LinePoint at_zero,
                              const LineSearchOptions& options = {});

/// True when both strong Wolfe inequalities hold at `at_tau`.
bool satisfies_strong_wolfe(LinePoint at_zero, double tau, LinePoint at_tau, double c1, double c2);

}  // namespace fastbfgs
