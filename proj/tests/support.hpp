#pragma once

// Fixtures shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/QR>

#include "fastbfgs/problems.hpp"

namespace fastbfgs::testing {

/// Random symmetric positive definite matrix Q diag(ev) Q' with eigenvalues
/// spread evenly over [lo, hi].
inline Matrix random_spd(Eigen::Index n, std::mt19937& rng, double lo = 1.0, double hi = 10.0) {
  std::normal_distribution<double> normal;
  const Matrix g = Matrix::NullaryExpr(n, n, [&] { return normal(rng); });
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector ev(n);
  for (Eigen::Index i = 0; i < n; ++i) ev(i) = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  Matrix a = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

inline Vector random_vector(Eigen::Index n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  return Vector::NullaryExpr(n, [&] { return normal(rng); });
}

/// f = 0.5 x'Ax - b'x with random SPD A, random b and random start.
inline Problem random_quadratic(Eigen::Index n, std::mt19937& rng, double lo = 1.0, double hi = 10.0) {
  const Matrix a = random_spd(n, rng, lo, hi);
  return make_quadratic("quadratic", a, random_vector(n, rng), random_vector(n, rng));
}

/// Central finite-difference gradient, step 1e-6 (1 + |x_i|).
inline Vector fd_gradient(const Problem& p, const Vector& x) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    const double fp = p.value(xp);
    xp(i) = x(i) - h;
    const double fm = p.value(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (xp(i) + h - (xp(i) - h));
  }
  return g;
}

/// |grad - fd| / max(1, |grad|) in the 2-norm.
inline double gradient_error(const Problem& p, const Vector& x) {
  const Vector g = p.gradient(x);
  return (g - fd_gradient(p, x)).norm() / std::max(1.0, g.norm());
}

/// Smallest dimension of at least `target` accepted by the family.
inline Eigen::Index small_dim(const ProblemInfo& info, Eigen::Index target) {
  Eigen::Index n = std::max(info.min_dim, target);
  if (n % info.dim_multiple != 0) n += info.dim_multiple - n % info.dim_multiple;
  return n;
}

/// Worst gradient error at x0 and at `points` perturbations of x0 by up to
/// 0.1 per component.
inline double worst_gradient_error(const Problem& p, std::mt19937& rng, int points = 10) {
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  double worst = gradient_error(p, p.x0());
  for (int k = 0; k < points; ++k) {
    const Vector x = p.x0() + Vector::NullaryExpr(p.dim(), [&] { return jitter(rng); });
    worst = std::max(worst, gradient_error(p, x));
  }
  return worst;
}

}  // namespace fastbfgs::testing
