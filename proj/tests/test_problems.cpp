#include <set>

#include "doctest.h"
#include "fastbfgs/errors.hpp"
#include "fastbfgs/problems.hpp"
#include "support.hpp"

using namespace fastbfgs;

namespace {

bool registered(const std::string& name, Eigen::Index n) {
  for (const ProblemInfo& info : list_problems()) {
    if (info.name == name) return std::find(info.dims.begin(), info.dims.end(), n) != info.dims.end();
  }
  return false;
}

}  // namespace

TEST_CASE("registry lists the table problems with unique names") {
  const auto infos = list_problems();
  REQUIRE_FALSE(infos.empty());
  std::set<std::string> names;
  for (const auto& info : infos) {
    CHECK(names.insert(info.name).second);
    CHECK_FALSE(info.dims.empty());
    CHECK(default_dim(info.name) == info.dims.front());
  }
  CHECK(registered("ARWHEAD", 1024));
  CHECK(registered("SROSENBR", 1000));
  int core = 0;
  for (const auto& info : infos) core += info.core ? 1 : 0;
  CHECK(core == 14);
}

TEST_CASE("unknown names and invalid dimensions are rejected") {
  CHECK_THROWS_AS(get_problem("NOT-A-PROBLEM", 10), NameError);
  CHECK_THROWS_AS(get_problem("ARWHEAD", 0), DimensionError);
  CHECK_THROWS_AS(get_problem("SROSENBR", 999), DimensionError);
  for (const auto& info : list_problems()) {
    // Either accepted at exactly n or refused; never silently rounded.
    const Eigen::Index n = testing::small_dim(info, 10) + 1;
    if (n % info.dim_multiple == 0) {
      CHECK(get_problem(info.name, n).dim() == n);
    } else {
      CHECK_THROWS_AS(get_problem(info.name, n), DimensionError);
    }
  }
}

TEST_CASE("ARWHEAD vanishes at (1, ..., 1, 0)") {
  const Problem p = get_problem("ARWHEAD", 1024);
  Vector x = Vector::Ones(1024);
  x(1023) = 0.0;
  // Each term: (1 + 0)^2 - 4 + 3 = 0.
  CHECK(p.value(x) == doctest::Approx(0.0));
  CHECK(p.gradient(x).norm() < 1e-12);
}

TEST_CASE("SROSENBR is stationary at the all-ones point") {
  const Problem p = get_problem("SROSENBR", 1000);
  const Vector x = Vector::Ones(1000);
  CHECK(p.value(x) == doctest::Approx(0.0));
  CHECK(p.gradient(x).norm() == 0.0);
  // Central differences with h ~ 1e-6 carry O(h^2) truncation error here.
  CHECK(testing::fd_gradient(p, x).norm() <= 1e-6);
}

TEST_CASE("every registered problem passes the finite-difference gradient check") {
  std::mt19937 rng(2024);
  for (const ProblemInfo& info : list_problems()) {
    CAPTURE(info.name);
    const Problem p = get_problem(info.name, testing::small_dim(info, 10));
    CHECK(testing::worst_gradient_error(p, rng) <= 1e-6);
  }
}

TEST_CASE("problems validate input length and expose x0") {
  const Problem p = get_problem("EDENSCH", 1000);
  CHECK(p.x0().size() == 1000);
  CHECK(std::isfinite(p.value(p.x0())));
  CHECK_THROWS_AS(p.value(Vector::Zero(10)), DimensionError);
  const Problem q = p.with_x0(Vector::Zero(1000));
  CHECK(q.x0().norm() == 0.0);
  CHECK(q.value(q.x0()) == p.value(Vector::Zero(1000)));
}

TEST_CASE("make_quadratic has gradient Ax - b") {
  Matrix a(2, 2);
  a << 2, 1, 1, 3;
  Vector b(2);
  b << 1, -1;
  const Problem p = make_quadratic("q", a, b, Vector::Zero(2));
  Vector x(2);
  x << 0.5, 2.0;
  CHECK((p.gradient(x) - (a * x - b)).norm() < 1e-14);
  CHECK(p.value(x) == doctest::Approx(0.5 * x.dot(a * x) - b.dot(x)));
}
