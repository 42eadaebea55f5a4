#pragma once

#include "fastbfgs/evaluation.hpp"
#include "fastbfgs/problems.hpp"

namespace fastbfgs {

/// Escape term of the search direction p = -H~ g - alpha v.
struct Correction {
  Vector v;  // unit length, or zero
  double alpha = 0.0;
  int hvp_evals = 0;
};

/// Forward-difference Hessian-vector product
///   (grad(x + eps d) - g0) / eps,  eps = 1e-6 / |d|_2,
/// where g0 is the cached gradient at x. One gradient evaluation.
/// Throws ZeroDirectionError for d = 0.
Vector hvp(const GradientFn& grad, const Vector& x, const Vector& d, const Vector& g0);

/// The two directions the correction is built from:
///   u1 = A g - A (A Hg),  u2 = g,   A = Hessian at x (finite differences)
/// The A (A Hg) term is skipped when Hg = 0 and everything is zero when g = 0.
struct CorrectionBasis {
  Vector u1;
  Vector u2;
  /// A g, reused by ver_b.
  Vector ag;
  int evals = 0;
};

CorrectionBasis build_u1_u2(const Vector& g, const Vector& hg, const GradientFn& grad, const Vector& x);

/// Cosine threshold below which u1 and u2 count as (anti)parallel.
inline constexpr double kParallelTolerance = 1e-10;

/// Variant A: v combines u1 and u2 after mutual Gram-Schmidt
/// orthogonalization so that alpha v'g >= 0; alpha = v'u1 / |A v|^2.
/// At most four gradient evaluations.
Correction ver_a(const Vector& g, const Vector& hg, const GradientFn& grad, const Vector& x);

/// Variant B: v = g / |g|, same alpha estimate. At most three gradient
/// evaluations (A v is recovered from A g).
Correction ver_b(const Vector& g, const Vector& hg, const GradientFn& grad, const Vector& x);

/// alpha = v'u1 / |A v|^2 with the denominator guard applied (alpha = 0 when
/// |A v|^2 < 1e-300 or not finite).
double correction_length(const Vector& v, const Vector& u1, const Vector& av);

}  // namespace fastbfgs
