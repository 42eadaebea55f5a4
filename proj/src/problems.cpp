#include "fastbfgs/problems.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "fastbfgs/errors.hpp"

// Test functions follow Andrei's unconstrained collection and the CUTE SIF
// files. Standard starting points used by the registry:
//
//   ARWHEAD   x0 = 1                 BDEXP     x0 = 1
//   COSINE    x0 = 1                 DQRTIC    x0 = 2
//   EDENSCH   x0 = 0                 ENGVAL1   x0 = 2
//   EG2       x0 = 1                 EXTROSNB  x0 = -1
//   HIMMELBG  x0 = 1.5               LIARWHD   x0 = 4
//   NONDIA    x0 = -1                POWELLSG  x0 = (3, -1, 0, 1, ...)
//   SROSENBR  x0 = (-1.2, 1, ...)    TQUARTIC  x0 = 0.1
//
// Extended set: TOINTGSS x0 = 3, BDQRTIC x0 = 1, FREUROTH x0 = (0.5, -2, 0,
// ...), GENROSE x0_i = i/(n+1), NONSCOMP x0 = 3, WOODS x0 = (-3, -1, ...),
// DIXMAANE/F/G x0 = 2, HIMMELH x0 = (0, 2, 0, 2, ...), NONDQUAR x0 = (1, -1, ...),
// SCHMVETT x0 = 0.5, SINQUAD x0 = 0.1.

namespace fastbfgs {

Problem::Problem(std::string name, Eigen::Index n, ObjectiveFn objective, Vector x0)
    : name_(std::move(name)), n_(n), objective_(std::move(objective)), x0_(std::move(x0)) {
  if (n_ <= 0) throw DimensionError(name_ + ": dimension must be positive");
  if (x0_.size() != n_) throw DimensionError(name_ + ": x0 has wrong length");
}

void Problem::check_dim(const Vector& x) const {
  if (x.size() != n_) {
    throw DimensionError(name_ + ": expected a vector of length " + std::to_string(n_) +
                         ", got " + std::to_string(x.size()));
  }
}

Problem Problem::with_x0(Vector x0) const { return Problem(name_, n_, objective_, std::move(x0)); }

double Problem::value(const Vector& x) const {
  Vector g;
  return value_and_gradient(x, g);
}

Vector Problem::gradient(const Vector& x) const {
  Vector g;
  value_and_gradient(x, g);
  return g;
}

double Problem::value_and_gradient(const Vector& x, Vector& grad) const {
  check_dim(x);
  grad.setZero(n_);
  return objective_(x, grad);
}

namespace {

using Index = Eigen::Index;

inline double sq(double v) { return v * v; }

double arwhead(const Vector& x, Vector& g) {
  const Index n = x.size();
  const double xn = x(n - 1);
  double f = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    const double q = x(i) * x(i) + xn * xn;
    f += q * q - 4.0 * x(i) + 3.0;
    g(i) += 4.0 * x(i) * q - 4.0;
    g(n - 1) += 4.0 * xn * q;
  }
  return f;
}

double bdexp(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 2 < x.size(); ++i) {
    const double u = x(i) + x(i + 1);
    const double e = std::exp(-x(i + 2) * u);
    f += u * e;
    const double du = e * (1.0 - u * x(i + 2));
    g(i) += du;
    g(i + 1) += du;
    g(i + 2) -= u * u * e;
  }
  return f;
}

double cosine(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i) * x(i) - 0.5 * x(i + 1);
    f += std::cos(a);
    const double s = std::sin(a);
    g(i) -= 2.0 * x(i) * s;
    g(i + 1) += 0.5 * s;
  }
  return f;
}

double dqrtic(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double d = x(i) - static_cast<double>(i + 1);
    f += sq(sq(d));
    g(i) += 4.0 * d * d * d;
  }
  return f;
}

double edensch(const Vector& x, Vector& g) {
  double f = 16.0;
  for (Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i) - 2.0;
    const double b = x(i + 1) * a;
    const double c = x(i + 1) + 1.0;
    f += sq(sq(a)) + b * b + c * c;
    g(i) += 4.0 * a * a * a + 2.0 * b * x(i + 1);
    g(i + 1) += 2.0 * b * a + 2.0 * c;
  }
  return f;
}

double engval1(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 1 < x.size(); ++i) {
    const double q = x(i) * x(i) + x(i + 1) * x(i + 1);
    f += q * q - 4.0 * x(i) + 3.0;
    g(i) += 4.0 * x(i) * q - 4.0;
    g(i + 1) += 4.0 * x(i + 1) * q;
  }
  return f;
}

double eg2(const Vector& x, Vector& g) {
  const Index n = x.size();
  double f = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    const double a = x(0) + x(i) * x(i) - 1.0;
    f += std::sin(a);
    const double c = std::cos(a);
    g(0) += c;
    g(i) += 2.0 * x(i) * c;
  }
  const double xn2 = x(n - 1) * x(n - 1);
  f += 0.5 * std::sin(xn2);
  g(n - 1) += x(n - 1) * std::cos(xn2);
  return f;
}

double extrosnb(const Vector& x, Vector& g) {
  double f = sq(x(0) - 1.0);
  g(0) += 2.0 * (x(0) - 1.0);
  for (Index i = 1; i < x.size(); ++i) {
    const double r = x(i) - x(i - 1) * x(i - 1);
    f += 100.0 * r * r;
    g(i) += 200.0 * r;
    g(i - 1) -= 400.0 * x(i - 1) * r;
  }
  return f;
}

double himmelbg(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 1 < x.size(); i += 2) {
    const double a = x(i);
    const double b = x(i + 1);
    const double q = 2.0 * a * a + 3.0 * b * b;
    const double e = std::exp(-a - b);
    f += q * e;
    g(i) += (4.0 * a - q) * e;
    g(i + 1) += (6.0 * b - q) * e;
  }
  return f;
}

double liarwhd(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double r = x(i) * x(i) - x(0);
    f += 4.0 * r * r + sq(x(i) - 1.0);
    g(i) += 16.0 * x(i) * r + 2.0 * (x(i) - 1.0);
    g(0) -= 8.0 * r;
  }
  return f;
}

double nondia(const Vector& x, Vector& g) {
  double f = sq(x(0) - 1.0);
  g(0) += 2.0 * (x(0) - 1.0);
  for (Index i = 1; i < x.size(); ++i) {
    const double r = x(0) - x(i - 1) * x(i - 1);
    f += 100.0 * r * r;
    g(0) += 200.0 * r;
    g(i - 1) -= 400.0 * x(i - 1) * r;
  }
  return f;
}

double powellsg(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 3 < x.size(); i += 4) {
    const double r1 = x(i) + 10.0 * x(i + 1);
    const double r2 = x(i + 2) - x(i + 3);
    const double r3 = x(i + 1) - 2.0 * x(i + 2);
    const double r4 = x(i) - x(i + 3);
    f += r1 * r1 + 5.0 * r2 * r2 + sq(sq(r3)) + 10.0 * sq(sq(r4));
    const double d3 = 4.0 * r3 * r3 * r3;
    const double d4 = 40.0 * r4 * r4 * r4;
    g(i) += 2.0 * r1 + d4;
    g(i + 1) += 20.0 * r1 + d3;
    g(i + 2) += 10.0 * r2 - 2.0 * d3;
    g(i + 3) += -10.0 * r2 - d4;
  }
  return f;
}

double srosenbr(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 1 < x.size(); i += 2) {
    const double r = x(i + 1) - x(i) * x(i);
    const double s = 1.0 - x(i);
    f += 100.0 * r * r + s * s;
    g(i) += -400.0 * x(i) * r - 2.0 * s;
    g(i + 1) += 200.0 * r;
  }
  return f;
}

double tquartic(const Vector& x, Vector& g) {
  double f = sq(x(0) - 1.0);
  g(0) += 2.0 * (x(0) - 1.0);
  for (Index i = 1; i < x.size(); ++i) {
    const double q = x(0) * x(0) - x(i) * x(i);
    f += q * q;
    g(0) += 4.0 * x(0) * q;
    g(i) -= 4.0 * x(i) * q;
  }
  return f;
}

double tointgss(const Vector& x, Vector& g) {
  const Index n = x.size();
  const double ap = 10.0 / static_cast<double>(n + 2);
  double f = 0.0;
  for (Index i = 0; i + 2 < n; ++i) {
    const double c = x(i + 2);
    const double d = x(i) - x(i + 1);
    const double t = 0.1 + c * c;
    const double e = std::exp(-d * d / t);
    const double w = ap + c * c;
    f += w * (2.0 - e);
    const double dd = w * e * 2.0 * d / t;
    g(i) += dd;
    g(i + 1) -= dd;
    g(i + 2) += 2.0 * c * (2.0 - e) - w * e * 2.0 * c * d * d / (t * t);
  }
  return f;
}

double bdqrtic(const Vector& x, Vector& g) {
  const Index n = x.size();
  const double xn = x(n - 1);
  double f = 0.0;
  for (Index i = 0; i + 4 < n; ++i) {
    const double a = -4.0 * x(i) + 3.0;
    const double q = x(i) * x(i) + 2.0 * x(i + 1) * x(i + 1) + 3.0 * x(i + 2) * x(i + 2) +
                     4.0 * x(i + 3) * x(i + 3) + 5.0 * xn * xn;
    f += a * a + q * q;
    g(i) += -8.0 * a + 4.0 * q * x(i);
    g(i + 1) += 8.0 * q * x(i + 1);
    g(i + 2) += 12.0 * q * x(i + 2);
    g(i + 3) += 16.0 * q * x(i + 3);
    g(n - 1) += 20.0 * q * xn;
  }
  return f;
}

double freuroth(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 1 < x.size(); ++i) {
    const double v = x(i + 1);
    const double r1 = -13.0 + x(i) + ((5.0 - v) * v - 2.0) * v;
    const double r2 = -29.0 + x(i) + ((v + 1.0) * v - 14.0) * v;
    f += r1 * r1 + r2 * r2;
    g(i) += 2.0 * r1 + 2.0 * r2;
    g(i + 1) += 2.0 * r1 * (10.0 * v - 3.0 * v * v - 2.0) + 2.0 * r2 * (3.0 * v * v + 2.0 * v - 14.0);
  }
  return f;
}

double genrose(const Vector& x, Vector& g) {
  double f = 1.0;
  for (Index i = 1; i < x.size(); ++i) {
    const double r = x(i) - x(i - 1) * x(i - 1);
    const double s = x(i) - 1.0;
    f += 100.0 * r * r + s * s;
    g(i) += 200.0 * r + 2.0 * s;
    g(i - 1) -= 400.0 * x(i - 1) * r;
  }
  return f;
}

double nonscomp(const Vector& x, Vector& g) {
  double f = sq(x(0) - 1.0);
  g(0) += 2.0 * (x(0) - 1.0);
  for (Index i = 1; i < x.size(); ++i) {
    const double r = x(i) - x(i - 1) * x(i - 1);
    f += 4.0 * r * r;
    g(i) += 8.0 * r;
    g(i - 1) -= 16.0 * x(i - 1) * r;
  }
  return f;
}

double woods(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 3 < x.size(); i += 4) {
    const double a = x(i), b = x(i + 1), c = x(i + 2), d = x(i + 3);
    const double r1 = b - a * a;
    const double r2 = d - c * c;
    f += 100.0 * r1 * r1 + sq(1.0 - a) + 90.0 * r2 * r2 + sq(1.0 - c) +
         10.1 * (sq(b - 1.0) + sq(d - 1.0)) + 19.8 * (b - 1.0) * (d - 1.0);
    g(i) += -400.0 * a * r1 - 2.0 * (1.0 - a);
    g(i + 1) += 200.0 * r1 + 20.2 * (b - 1.0) + 19.8 * (d - 1.0);
    g(i + 2) += -360.0 * c * r2 - 2.0 * (1.0 - c);
    g(i + 3) += 180.0 * r2 + 20.2 * (d - 1.0) + 19.8 * (b - 1.0);
  }
  return f;
}

struct DixmaanCoefficients {
  double alpha, beta, gamma, delta;
};

ObjectiveFn dixmaan(DixmaanCoefficients c) {
  // Exponents (k1, k2, k3, k4) = (1, 0, 0, 1) for the E/F/G members.
  return [c](const Vector& x, Vector& g) {
    const Index n = x.size();
    const Index m = n / 3;
    const double nn = static_cast<double>(n);
    double f = 1.0;
    for (Index i = 0; i < n; ++i) {
      const double w = static_cast<double>(i + 1) / nn;
      f += c.alpha * x(i) * x(i) * w;
      g(i) += 2.0 * c.alpha * x(i) * w;
    }
    for (Index i = 0; i + 1 < n; ++i) {
      const double p = x(i + 1) + x(i + 1) * x(i + 1);
      f += c.beta * x(i) * x(i) * p * p;
      g(i) += 2.0 * c.beta * x(i) * p * p;
      g(i + 1) += 2.0 * c.beta * x(i) * x(i) * p * (1.0 + 2.0 * x(i + 1));
    }
    for (Index i = 0; i < 2 * m; ++i) {
      const double z = x(i + m);
      f += c.gamma * x(i) * x(i) * sq(sq(z));
      g(i) += 2.0 * c.gamma * x(i) * sq(sq(z));
      g(i + m) += 4.0 * c.gamma * x(i) * x(i) * z * z * z;
    }
    for (Index i = 0; i < m; ++i) {
      const double w = static_cast<double>(i + 1) / nn;
      f += c.delta * x(i) * x(i + 2 * m) * w;
      g(i) += c.delta * x(i + 2 * m) * w;
      g(i + 2 * m) += c.delta * x(i) * w;
    }
    return f;
  };
}

double himmelh(const Vector& x, Vector& g) {
  double f = 0.0;
  for (Index i = 0; i + 1 < x.size(); i += 2) {
    const double a = x(i), b = x(i + 1);
    f += -3.0 * a - 2.0 * b + 2.0 + a * a * a + b * b;
    g(i) += -3.0 + 3.0 * a * a;
    g(i + 1) += -2.0 + 2.0 * b;
  }
  return f;
}

double nondquar(const Vector& x, Vector& g) {
  const Index n = x.size();
  double f = sq(x(0) - x(1));
  g(0) += 2.0 * (x(0) - x(1));
  g(1) -= 2.0 * (x(0) - x(1));
  for (Index i = 0; i + 2 < n; ++i) {
    const double r = x(i) + x(i + 1) + x(n - 1);
    f += sq(sq(r));
    const double d = 4.0 * r * r * r;
    g(i) += d;
    g(i + 1) += d;
    g(n - 1) += d;
  }
  const double t = x(n - 2) + x(n - 1);
  f += t * t;
  g(n - 2) += 2.0 * t;
  g(n - 1) += 2.0 * t;
  return f;
}

double schmvett(const Vector& x, Vector& g) {
  constexpr double pi = std::numbers::pi;
  double f = 0.0;
  for (Index i = 0; i + 2 < x.size(); ++i) {
    const double a = x(i), b = x(i + 1), c = x(i + 2);
    const double d = a - b;
    const double q = 1.0 + d * d;
    const double s = 0.5 * (pi * b + c);
    const double r = (a + c) / b - 2.0;
    const double e = std::exp(-r * r);
    f -= 1.0 / q + std::sin(s) + e;
    // d/da 1/q = -2d/q^2 ; d/db = +2d/q^2
    const double dq = 2.0 * d / (q * q);
    const double cs = std::cos(s);
    const double dr = -2.0 * r * e;  // derivative of e with respect to r
    g(i) -= -dq + dr / b;
    g(i + 1) -= dq + 0.5 * pi * cs + dr * (-(a + c) / (b * b));
    g(i + 2) -= 0.5 * cs + dr / b;
  }
  return f;
}

double sinquad(const Vector& x, Vector& g) {
  const Index n = x.size();
  const double x1 = x(0);
  const double xn = x(n - 1);
  double f = sq(sq(x1 - 1.0));
  g(0) += 4.0 * (x1 - 1.0) * sq(x1 - 1.0);
  for (Index i = 1; i + 1 < n; ++i) {
    const double r = std::sin(x(i) - xn) - x1 * x1 + x(i) * x(i);
    f += r * r;
    const double c = std::cos(x(i) - xn);
    g(i) += 2.0 * r * (c + 2.0 * x(i));
    g(n - 1) -= 2.0 * r * c;
    g(0) -= 4.0 * r * x1;
  }
  const double t = xn * xn - x1 * x1;
  f += t * t;
  g(n - 1) += 4.0 * t * xn;
  g(0) -= 4.0 * t * x1;
  return f;
}

// x0 builders.
Vector constant(Index n, double v) { return Vector::Constant(n, v); }

Vector periodic(Index n, std::initializer_list<double> pattern) {
  Vector x(n);
  const auto* p = pattern.begin();
  const Index len = static_cast<Index>(pattern.size());
  for (Index i = 0; i < n; ++i) x(i) = p[i % len];
  return x;
}

struct Family {
  ProblemInfo info;
  ObjectiveFn objective;
  std::function<Vector(Index)> start;
};

const std::vector<Family>& registry() {
  static const std::vector<Family> families = [] {
    std::vector<Family> r;
    auto add = [&r](std::string name, std::vector<Index> dims, Index min_dim, Index multiple,
                    bool core, ObjectiveFn fn, std::function<Vector(Index)> start) {
      r.push_back(Family{ProblemInfo{std::move(name), std::move(dims), min_dim, multiple, core},
                         std::move(fn), std::move(start)});
    };
    const auto fill = [](double v) { return [v](Index n) { return constant(n, v); }; };

    add("ARWHEAD", {1024}, 2, 1, true, arwhead, fill(1.0));
    add("BDEXP", {1024}, 3, 1, true, bdexp, fill(1.0));
    add("COSINE", {1024}, 2, 1, true, cosine, fill(1.0));
    add("DQRTIC", {1000}, 1, 1, true, dqrtic, fill(2.0));
    add("EDENSCH", {1000}, 2, 1, true, edensch, fill(0.0));
    add("ENGVAL1", {1000}, 2, 1, true, engval1, fill(2.0));
    add("EG2", {1000}, 2, 1, true, eg2, fill(1.0));
    add("EXTROSNB", {1000}, 2, 1, true, extrosnb, fill(-1.0));
    add("HIMMELBG", {1000}, 2, 2, true, himmelbg, fill(1.5));
    add("LIARWHD", {1000}, 1, 1, true, liarwhd, fill(4.0));
    add("NONDIA", {1000}, 2, 1, true, nondia, fill(-1.0));
    add("POWELLSG", {1000}, 4, 4, true, powellsg, [](Index n) { return periodic(n, {3.0, -1.0, 0.0, 1.0}); });
    add("SROSENBR", {1000}, 2, 2, true, srosenbr, [](Index n) { return periodic(n, {-1.2, 1.0}); });
    add("TQUARTIC", {1000}, 2, 1, true, tquartic, fill(0.1));

    add("TOINTGSS", {1000}, 3, 1, false, tointgss, fill(3.0));
    add("BDQRTIC", {1024}, 5, 1, false, bdqrtic, fill(1.0));
    add("FREUROTH", {1000}, 2, 1, false, freuroth, [](Index n) {
      Vector x = Vector::Zero(n);
      x(0) = 0.5;
      x(1) = -2.0;
      return x;
    });
    add("GENROSE", {1000}, 2, 1, false, genrose, [](Index n) {
      Vector x(n);
      for (Index i = 0; i < n; ++i) x(i) = static_cast<double>(i + 1) / static_cast<double>(n + 1);
      return x;
    });
    add("NONSCOMP", {1000}, 2, 1, false, nonscomp, fill(3.0));
    add("WOODS", {1000}, 4, 4, false, woods, [](Index n) { return periodic(n, {-3.0, -1.0}); });
    add("DIXMAANE", {1500}, 3, 3, false, dixmaan({1.0, 0.0, 0.125, 0.125}), fill(2.0));
    add("DIXMAANF", {1500}, 3, 3, false, dixmaan({1.0, 0.0625, 0.0625, 0.0625}), fill(2.0));
    add("DIXMAANG", {1500}, 3, 3, false, dixmaan({1.0, 0.125, 0.125, 0.125}), fill(2.0));
    add("HIMMELH", {1000}, 2, 2, false, himmelh, [](Index n) { return periodic(n, {0.0, 2.0}); });
    add("NONDQUAR", {1000}, 3, 1, false, nondquar, [](Index n) { return periodic(n, {1.0, -1.0}); });
    add("SCHMVETT", {1000}, 3, 1, false, schmvett, fill(0.5));
    add("SINQUAD", {1000}, 3, 1, false, sinquad, fill(0.1));
    return r;
  }();
  return families;
}

const Family& find_family(const std::string& name) {
  for (const auto& fam : registry()) {
    if (fam.info.name == name) return fam;
  }
  throw NameError("unknown problem '" + name + "'");
}

}  // namespace

std::vector<ProblemInfo> list_problems() {
  std::vector<ProblemInfo> out;
  out.reserve(registry().size());
  for (const auto& fam : registry()) out.push_back(fam.info);
  return out;
}

Problem get_problem(const std::string& name, Eigen::Index n) {
  const Family& fam = find_family(name);
  if (n < fam.info.min_dim) {
    throw DimensionError(name + " requires n >= " + std::to_string(fam.info.min_dim) + ", got " +
                         std::to_string(n));
  }
  if (n % fam.info.dim_multiple != 0) {
    throw DimensionError(name + " requires n divisible by " + std::to_string(fam.info.dim_multiple) +
                         ", got " + std::to_string(n));
  }
  return Problem(name, n, fam.objective, fam.start(n));
}

Eigen::Index default_dim(const std::string& name) { return find_family(name).info.dims.front(); }

Problem make_quadratic(const std::string& name, const Matrix& a, const Vector& b, Vector x0) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw DimensionError(name + ": quadratic data has inconsistent shape");
  }
  const Eigen::Index n = b.size();
  return Problem(name, n,
                 [a, b](const Vector& x, Vector& g) {
                   const Vector ax = a * x;
                   g = ax - b;
                   return 0.5 * x.dot(ax) - b.dot(x);
                 },
                 std::move(x0));
}

}  // namespace fastbfgs
