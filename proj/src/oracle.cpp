#include "fastbfgs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <Eigen/SVD>
#include "json.hpp"

#include "fastbfgs/errors.hpp"

namespace fastbfgs {

SubspaceBasis schmidt(const Matrix& s, const Vector& x0) {
  if (s.cols() < 1) throw DimensionError("schmidt: need at least one column");
  if (x0.size() != s.rows()) throw DimensionError("schmidt: anchor has wrong length");
  if (s.cols() > s.rows()) throw RankError("schmidt: more columns than rows");
  double largest = 0.0;
  for (Eigen::Index j = 0; j < s.cols(); ++j) largest = std::max(largest, s.col(j).norm());
  if (!(largest > 0.0) || !std::isfinite(largest)) throw RankError("schmidt: zero or non-finite columns");

  Matrix q(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    Vector v = s.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
    }
    const double norm = v.norm();
    if (!(norm >= 1e-10 * largest)) {
      throw RankError("schmidt: column " + std::to_string(j) + " is numerically dependent on the previous ones");
    }
    q.col(j) = v / norm;
  }
  return {std::move(q), x0};
}

namespace {

struct Reduced {
  const Problem& problem;
  const SubspaceBasis& basis;

  double eval(const Vector& xi, Vector& grad_xi) const {
    Vector g;
    const double f = problem.value_and_gradient(basis.x0 + basis.s_unit * xi, g);
    grad_xi = basis.s_unit.transpose() * g;
    return f;
  }
};

}  // namespace

std::vector<XiIterate> xi_bfgs(const Problem& problem, const SubspaceBasis& basis, const Vector& xi0,
                               const Matrix& h0_xi, int steps, const TauProvider& tau,
                               const LineSearchOptions& options) {
  const Eigen::Index m = basis.s_unit.cols();
  if (basis.s_unit.rows() != problem.dim() || basis.x0.size() != problem.dim()) {
    throw DimensionError("xi_bfgs: basis does not match the problem dimension");
  }
  if (xi0.size() != m || h0_xi.rows() != m || h0_xi.cols() != m) {
    throw DimensionError("xi_bfgs: xi0 / H0 do not match the basis");
  }
  const Reduced reduced{problem, basis};

  std::vector<XiIterate> out;
  XiIterate cur;
  cur.xi = xi0;
  cur.h = h0_xi;
  cur.f = reduced.eval(cur.xi, cur.grad);
  out.push_back(cur);

  for (int k = 0; k < steps; ++k) {
    if (!(cur.grad.norm() > 0.0)) break;
    const Vector p = -(cur.h * cur.grad);
    XiIterate next;
    if (tau) {
      next.tau = tau(k);
      next.xi = cur.xi + next.tau * p;
      next.f = reduced.eval(next.xi, next.grad);
    } else {
      Vector xi_t, g_t;
      double f_t = 0.0;
      LineFunction phi = [&](double t) {
        xi_t = cur.xi + t * p;
        f_t = reduced.eval(xi_t, g_t);
        return LinePoint{f_t, g_t.dot(p)};
      };
      const LineSearchResult r = strong_wolfe(phi, {cur.f, cur.grad.dot(p)}, options);
      if (r.status != LineSearchStatus::converged) break;
      next.tau = r.tau;
      next.xi = std::move(xi_t);
      next.grad = std::move(g_t);
      next.f = f_t;
    }
    next.h = cur.h;
    bfgs_inverse_update(next.h, next.tau * p, next.grad - cur.grad);
    cur = std::move(next);
    out.push_back(cur);
  }
  return out;
}

double check_secant(const SubspaceState& state, const Vector& s, const Vector& y) {
  const double sn = s.norm();
  if (!(sn > 0.0)) throw ZeroDirectionError("check_secant: s must be nonzero");
  return (state.apply(y) - s).norm() / sn;
}

int numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

Matrix materialize(const SubspaceState& state) {
  if (state.empty()) return Matrix::Zero(state.dim(), state.dim());
  const Matrix s = state.columns();
  return s * state.L() * s.transpose();
}

double EquivalenceReport::max_deviation() const {
  return std::max({iterate_deviation, h_deviation, step_deviation});
}

std::string EquivalenceReport::to_text() const {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific;
  os << "problem " << problem << " n=" << n << " m=" << m << " steps=" << steps_compared << "/"
     << steps_requested << " attempts=" << attempts << "\n"
     << "  iterate deviation   " << iterate_deviation << "\n"
     << "  projected H         " << h_deviation << "\n"
     << "  step norm deviation " << step_deviation << "\n"
     << "  secant residual     " << secant_residual << "\n"
     << "  truncation residual " << truncation_residual << "\n"
     << "  rank                " << (rank_ok ? "ok" : "deficient") << "\n";
  return os.str();
}

std::string EquivalenceReport::to_json() const {
  const nlohmann::json j = {
      {"problem", problem},
      {"n", n},
      {"m", m},
      {"steps_requested", steps_requested},
      {"steps_compared", steps_compared},
      {"attempts", attempts},
      {"iterate_deviation", iterate_deviation},
      {"h_deviation", h_deviation},
      {"step_deviation", step_deviation},
      {"secant_residual", secant_residual},
      {"truncation_residual", truncation_residual},
      {"rank_ok", rank_ok},
  };
  return j.dump(2);
}

namespace {

// What the constrained run looked like right after step k (x_k -> x_{k+1}).
struct Recorded {
  Vector x;  // x_{k+1}
  double tau = 0.0;
  SubspaceState state;
  double secant = 0.0;
  double truncation = 0.0;
  bool rank_ok = true;
};

struct SeededRun {
  std::vector<Recorded> steps;
  Vector x0;
  bool skipped_pair = false;
};

SeededRun run_constrained(const Problem& problem, int m, int steps, const EquivalenceOptions& options) {
  OptimizerConfig config;
  config.variant = options.seed_variant;
  config.m = m;
  config.constrained_mode = true;
  config.free_iterations = m;
  config.reorder_eviction = options.reorder_eviction;
  config.tol = std::numeric_limits<double>::min();
  config.max_nfg = 1000000;
  config.max_iterations = m + steps;

  SeededRun run;
  run.x0 = problem.x0();
  const bool check_rank = options.check_rank && problem.dim() <= 200;
  Observer observer = [&](const IterationView& view) {
    Recorded rec{view.x, view.tau, view.state};
    if (!view.absorb) run.skipped_pair = true;
    if (view.absorb && view.absorb->truncated) rec.truncation = view.absorb->residual;
    if (view.absorb && view.s.norm() > 0.0) rec.secant = check_secant(view.state, view.s, view.y);
    if (check_rank) rec.rank_ok = numerical_rank(materialize(view.state)) == view.state.size();
    run.steps.push_back(std::move(rec));
  };
  fast_bfgs(problem, config, observer);
  return run;
}

}  // namespace

EquivalenceReport check_equivalence(const Problem& problem, int m, int steps, const EquivalenceOptions& options) {
  if (m < 1) throw ConfigError("check_equivalence: m must be positive");
  if (steps < 0) throw ConfigError("check_equivalence: steps must be nonnegative");
  if (m > problem.dim()) throw RankError("check_equivalence: m exceeds the problem dimension");

  EquivalenceReport report;
  report.problem = problem.name();
  report.n = problem.dim();
  report.m = m;
  report.steps_requested = steps;
  if (steps == 0) return report;

  std::mt19937 rng(options.jitter_seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  Problem current = problem;
  for (int attempt = 0;; ++attempt) {
    report.attempts = attempt + 1;
    SeededRun run = run_constrained(current, m, steps, options);
    std::optional<SubspaceBasis> basis;
    if (!run.skipped_pair && static_cast<int>(run.steps.size()) >= m) {
      try {
        basis = schmidt(run.steps[m - 1].state.columns(), run.x0);
      } catch (const RankError&) {
        basis.reset();
      }
    }
    if (!basis) {
      if (attempt >= options.max_retries) throw RankError("check_equivalence: no full-rank seed found");
      Vector x0 = current.x0();
      for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) += jitter(rng) * (1.0 + std::abs(x0(i)));
      current = current.with_x0(std::move(x0));
      continue;
    }

    const Matrix& su = basis->s_unit;
    auto projected_h = [&](const SubspaceState& state) {
      const Matrix c = su.transpose() * state.columns();
      return Matrix(c * state.L() * c.transpose());
    };
    const Recorded& seed = run.steps[m - 1];
    const Vector xi_m = su.transpose() * (seed.x - basis->x0);
    const int available = static_cast<int>(run.steps.size()) - m;
    const TauProvider tau = [&](int k) { return run.steps[m + k].tau; };
    const std::vector<XiIterate> xi = xi_bfgs(current, *basis, xi_m, projected_h(seed.state),
                                              std::min(steps, available), tau);

    const double floor = options.relative_floor * xi.front().grad.norm();
    report.iterate_deviation = (seed.x - (basis->x0 + su * xi_m)).norm();
    for (std::size_t j = 1; j < xi.size(); ++j) {
      if (!(xi[j - 1].grad.norm() > floor)) break;
      const Recorded& prev = run.steps[m + j - 2];
      const Recorded& now = run.steps[m + j - 1];
      report.iterate_deviation =
          std::max(report.iterate_deviation, (now.x - (basis->x0 + su * xi[j].xi)).norm());
      report.h_deviation =
          std::max(report.h_deviation, (projected_h(now.state) - xi[j].h).cwiseAbs().maxCoeff());
      report.step_deviation = std::max(
          report.step_deviation, std::abs((now.x - prev.x).norm() - (xi[j].xi - xi[j - 1].xi).norm()));
      report.steps_compared = static_cast<int>(j);
    }
    // Step properties over the seeding phase and the compared steps.
    const int upto = m + report.steps_compared;
    for (int k = 0; k < upto; ++k) {
      report.secant_residual = std::max(report.secant_residual, run.steps[k].secant);
      report.truncation_residual = std::max(report.truncation_residual, run.steps[k].truncation);
      report.rank_ok = report.rank_ok && run.steps[k].rank_ok;
    }
    return report;
  }
}

}  // namespace fastbfgs
