#include "fastbfgs/correction.hpp"

#include <cmath>

#include "fastbfgs/errors.hpp"

namespace fastbfgs {

Vector hvp(const GradientFn& grad, const Vector& x, const Vector& d, const Vector& g0) {
  const double dn = d.norm();
  if (!(dn > 0.0)) throw ZeroDirectionError("hvp: direction must be nonzero");
  const double eps = 1e-6 / dn;
  const Vector xe = x + eps * d;
  return (grad(xe) - g0) / eps;
}

CorrectionBasis build_u1_u2(const Vector& g, const Vector& hg, const GradientFn& grad, const Vector& x) {
  CorrectionBasis b;
  b.u2 = g;
  if (!(g.norm() > 0.0)) {
    b.u1 = Vector::Zero(g.size());
    b.ag = Vector::Zero(g.size());
    return b;
  }
  b.ag = hvp(grad, x, g, g);
  ++b.evals;
  b.u1 = b.ag;
  if (hg.norm() > 0.0) {
    const Vector ahg = hvp(grad, x, hg, g);
    ++b.evals;
    if (ahg.norm() > 0.0) {
      b.u1 -= hvp(grad, x, ahg, g);
      ++b.evals;
    }
  }
  return b;
}

double correction_length(const Vector& v, const Vector& u1, const Vector& av) {
  const double den = av.squaredNorm();
  if (!std::isfinite(den) || den < 1e-300) return 0.0;
  const double alpha = v.dot(u1) / den;
  return std::isfinite(alpha) ? alpha : 0.0;
}

Correction ver_a(const Vector& g, const Vector& hg, const GradientFn& grad, const Vector& x) {
  const CorrectionBasis b = build_u1_u2(g, hg, grad, x);
  Correction c{Vector::Zero(g.size()), 0.0, b.evals};
  const double n1 = b.u1.norm();
  const double n2 = b.u2.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0) || !std::isfinite(n1)) return c;

  const double u12 = b.u1.dot(b.u2);
  const double cosine = u12 / (n1 * n2);
  if (cosine <= -1.0 + kParallelTolerance) return c;  // anti-parallel: no admissible v

  Vector v;
  if (cosine >= 1.0 - kParallelTolerance) {
    v = b.u1 + b.u2;
  } else {
    const Vector u1p = b.u1 - (u12 / (n2 * n2)) * b.u2;
    const Vector u2p = b.u2 - (u12 / (n1 * n1)) * b.u1;
    v = u1p / u1p.norm() + u2p / u2p.norm();
  }
  const double vn = v.norm();
  if (!(vn > 0.0) || !std::isfinite(vn)) return c;
  v /= vn;

  const Vector av = hvp(grad, x, v, g);
  ++c.hvp_evals;
  c.alpha = correction_length(v, b.u1, av);
  c.v = std::move(v);
  if (c.alpha == 0.0) c.v.setZero();
  return c;
}

Correction ver_b(const Vector& g, const Vector& hg, const GradientFn& grad, const Vector& x) {
  const CorrectionBasis b = build_u1_u2(g, hg, grad, x);
  Correction c{Vector::Zero(g.size()), 0.0, b.evals};
  const double gn = g.norm();
  if (!(gn > 0.0)) return c;
  // hvp(v) with v = g/|g| probes the same point as hvp(g), so A v = A g / |g|.
  const Vector v = g / gn;
  const Vector av = b.ag / gn;
  c.alpha = correction_length(v, b.u1, av);
  if (c.alpha != 0.0) c.v = v;
  return c;
}

}  // namespace fastbfgs
