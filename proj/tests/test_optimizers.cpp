#include <random>

#include "doctest.h"
#include "fastbfgs/errors.hpp"
#include "fastbfgs/optimizers.hpp"
#include "support.hpp"

using namespace fastbfgs;

namespace {

OptimizerConfig config_for(Variant v, int m = 8) {
  OptimizerConfig c;
  c.variant = v;
  c.m = m;
  return c;
}

Problem isotropic(Eigen::Index n) {
  return make_quadratic("half-norm", Matrix::Identity(n, n), Vector::Zero(n), Vector::LinSpaced(n, 1.0, 2.0));
}

}  // namespace

TEST_CASE("variant names round trip") {
  for (Variant v : {Variant::gd, Variant::bfgs, Variant::lbfgs, Variant::fast_a, Variant::fast_b}) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  CHECK_THROWS_AS(parse_variant("newton"), ConfigError);
  CHECK(uses_memory(Variant::fast_b));
  CHECK_FALSE(uses_memory(Variant::bfgs));
}

TEST_CASE("configuration is validated") {
  const Problem p = isotropic(3);
  OptimizerConfig c;
  c.c1 = 0.5;
  c.c2 = 0.4;
  CHECK_THROWS_AS(minimize(p, c), ConfigError);
  c = OptimizerConfig{};
  c.m = 0;
  CHECK_THROWS_AS(minimize(p, c), ConfigError);
  c = OptimizerConfig{};
  c.tol = 0.0;
  CHECK_THROWS_AS(minimize(p, c), ConfigError);
  c = OptimizerConfig{};
  c.max_nfg = 0;
  CHECK_THROWS_AS(minimize(p, c), ConfigError);
}

TEST_CASE("half squared norm") {
  SUBCASE("gradient descent converges in one iteration") {
    const Trace t = minimize(isotropic(10), config_for(Variant::gd));
    CHECK(t.status == RunStatus::converged);
    CHECK(t.iterations() == 1);
    CHECK(t.final_x.norm() < 1e-12);
  }
  SUBCASE("every variant in constrained mode after one step needs at most three iterations") {
    for (Variant v : {Variant::gd, Variant::bfgs, Variant::lbfgs, Variant::fast_a, Variant::fast_b}) {
      OptimizerConfig c = config_for(v);
      c.constrained_mode = true;
      c.free_iterations = 1;
      const Trace t = minimize(isotropic(10), c);
      CAPTURE(to_string(v));
      CHECK(t.status == RunStatus::converged);
      CHECK(t.iterations() <= 3);
    }
  }
}

TEST_CASE("dense BFGS") {
  SUBCASE("secant equation holds after every update on a 10x10 quadratic") {
    std::mt19937 rng(1);
    const Matrix a = testing::random_spd(10, rng);
    const Vector b = testing::random_vector(10, rng);
    Matrix h = Matrix::Identity(10, 10);
    Vector x = testing::random_vector(10, rng);
    for (int k = 0; k < 10; ++k) {
      const Vector g = a * x - b;
      if (g.norm() < 1e-10) break;
      const Vector p = -h * g;
      const double tau = -g.dot(p) / p.dot(a * p);  // exact line search
      const Vector s = tau * p;
      const Vector y = a * s;
      REQUIRE(bfgs_inverse_update(h, s, y));
      CHECK((h * y - s).norm() <= 1e-10 * std::max(1.0, s.norm()));
      x += s;
    }
    CHECK((a * x - b).norm() < 1e-8);
  }
  SUBCASE("finite termination on a 5-dimensional quadratic with a near-exact line search") {
    std::mt19937 rng(2);
    const Problem p = testing::random_quadratic(5, rng);
    OptimizerConfig c = config_for(Variant::bfgs);
    c.c1 = 1e-6;
    c.c2 = 1e-5;
    c.tol = 1e-8;
    const Trace t = minimize(p, c);
    CHECK(t.status == RunStatus::converged);
    CHECK(t.iterations() <= 6);
  }
  SUBCASE("curvature-free pairs leave H unchanged") {
    Matrix h = Matrix::Identity(2, 2);
    CHECK_FALSE(bfgs_inverse_update(h, Vector::Unit(2, 0), Vector::Unit(2, 1)));
    CHECK(h == Matrix::Identity(2, 2));
  }
  SUBCASE("capacity guard") {
    OptimizerConfig c = config_for(Variant::bfgs);
    c.dense_limit = 100;
    CHECK_THROWS_AS(minimize(get_problem("ARWHEAD", 1024), c), CapacityError);
  }
  SUBCASE("ARWHEAD at n = 1024 within three times 39 evaluations") {
    const Trace t = minimize(get_problem("ARWHEAD", 1024), config_for(Variant::bfgs));
    CHECK(t.status == RunStatus::converged);
    CHECK(t.nfg <= 3 * 39);
  }
}

TEST_CASE("L-BFGS") {
  SUBCASE("the two-loop recursion with no pairs scales the gradient") {
    const Vector g = Vector::LinSpaced(4, -1.0, 2.0);
    CHECK((two_loop({}, {}, g, 0.5) - 0.5 * g).norm() == 0.0);
  }
  SUBCASE("with m >= k the two-loop product equals dense BFGS from gamma I") {
    std::mt19937 rng(9);
    const int n = 12;
    const Matrix a = testing::random_spd(n, rng);
    std::vector<Vector> ss, ys;
    for (int k = 0; k < 6; ++k) {
      ss.push_back(testing::random_vector(n, rng));
      ys.push_back(a * ss.back());
    }
    const double gamma = ss.back().dot(ys.back()) / ys.back().dot(ys.back());
    Matrix h = gamma * Matrix::Identity(n, n);
    for (std::size_t k = 0; k < ss.size(); ++k) bfgs_inverse_update(h, ss[k], ys[k]);
    const Vector g = testing::random_vector(n, rng);
    const Vector dense = h * g;
    CHECK((two_loop(ss, ys, g, gamma) - dense).norm() <= 1e-8 * dense.norm());
  }
  SUBCASE("ARWHEAD at n = 1024 within three times 26 evaluations") {
    const Trace t = minimize(get_problem("ARWHEAD", 1024), config_for(Variant::lbfgs));
    CHECK(t.status == RunStatus::converged);
    CHECK(t.nfg <= 3 * 26);
  }
}

TEST_CASE("gradient descent on the table problems") {
  const Trace e = minimize(get_problem("EDENSCH", 1000), config_for(Variant::gd));
  CHECK(e.status == RunStatus::converged);
  CHECK(e.nfg <= 3 * 59);
  const Trace t = minimize(get_problem("TOINTGSS", 1000), config_for(Variant::gd));
  CHECK(t.status == RunStatus::converged);
  CHECK(t.nfg <= 3 * 6);
}

TEST_CASE("Fast-BFGS") {
  SUBCASE("converges on the table problems quoted for each version") {
    for (const auto& [name, v] : std::vector<std::pair<std::string, Variant>>{
             {"EG2", Variant::fast_b}, {"BDEXP", Variant::fast_a}, {"ARWHEAD", Variant::fast_b}}) {
      CAPTURE(name);
      const Trace t = minimize(get_problem(name, default_dim(name)), config_for(v));
      CHECK(t.status == RunStatus::converged);
      CHECK(t.hvp_evals > 0);
      CHECK(t.hvp_evals < t.nfg);
      CHECK(t.final_gnorm() < 1e-5);
    }
  }
  SUBCASE("trace bookkeeping") {
    std::mt19937 rng(3);
    const Problem p = testing::random_quadratic(30, rng);
    const Trace t = minimize(p, config_for(Variant::fast_a, 4));
    REQUIRE(t.status == RunStatus::converged);
    CHECK(t.iterates.front().k == 0);
    CHECK(t.iterates.front().nfg == 1);
    for (std::size_t k = 1; k < t.iterates.size(); ++k) {
      CHECK(t.iterates[k].k == static_cast<long>(k));
      CHECK(t.iterates[k].nfg > t.iterates[k - 1].nfg);
      CHECK(t.iterates[k].f <= t.iterates[k - 1].f);
      CHECK(t.iterates[k].tau > 0.0);
    }
    CHECK(t.nfg >= t.iterates.back().nfg);
    CHECK(p.gradient(t.final_x).norm() == doctest::Approx(t.final_gnorm()));
  }
  SUBCASE("observer sees the state after each absorbed pair") {
    std::mt19937 rng(4);
    const Problem p = testing::random_quadratic(20, rng);
    int calls = 0;
    const Trace t = fast_bfgs(p, config_for(Variant::fast_b, 3), [&](const IterationView& view) {
      ++calls;
      CHECK(view.state.size() == std::min<long>(view.k + 1, 3));
      // s is tau p; the stored iterates differ from it by rounding only.
      CHECK((view.x - view.x_prev - view.s).norm() <= 1e-14 * (1.0 + view.x.norm()));
    });
    CHECK(calls == t.iterations());
  }
  SUBCASE("the budget is a hard cap") {
    OptimizerConfig c = config_for(Variant::fast_a);
    c.max_nfg = 10;
    const Trace t = minimize(get_problem("SROSENBR", 1000), c);
    CHECK(t.status == RunStatus::budget_exhausted);
    CHECK(t.nfg <= 10);
  }
  SUBCASE("iteration limit") {
    OptimizerConfig c = config_for(Variant::fast_b);
    c.max_iterations = 2;
    const Trace t = minimize(get_problem("EDENSCH", 1000), c);
    CHECK(t.status == RunStatus::iteration_limit);
    CHECK(t.iterations() == 2);
  }
  SUBCASE("gd and bfgs refuse to be run as fast_bfgs") {
    CHECK_THROWS_AS(fast_bfgs(isotropic(3), config_for(Variant::bfgs)), ConfigError);
  }
}

TEST_CASE("a start at the minimizer converges with one evaluation") {
  const Problem p = make_quadratic("zero", Matrix::Identity(4, 4), Vector::Zero(4), Vector::Zero(4));
  for (Variant v : {Variant::gd, Variant::bfgs, Variant::lbfgs, Variant::fast_a, Variant::fast_b}) {
    const Trace t = minimize(p, config_for(v));
    CHECK(t.status == RunStatus::converged);
    CHECK(t.nfg == 1);
    CHECK(t.iterations() == 0);
  }
}
