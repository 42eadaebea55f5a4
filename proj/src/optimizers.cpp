#include "fastbfgs/optimizers.hpp"

#include <cmath>
#include <optional>

#include "fastbfgs/errors.hpp"
#include "fastbfgs/evaluation.hpp"

namespace fastbfgs {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::gd: return "gd";
    case Variant::bfgs: return "bfgs";
    case Variant::lbfgs: return "lbfgs";
    case Variant::fast_a: return "fast-a";
    case Variant::fast_b: return "fast-b";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::gd, Variant::bfgs, Variant::lbfgs, Variant::fast_a, Variant::fast_b}) {
    if (name == to_string(v)) return v;
  }
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

bool uses_memory(Variant v) { return v == Variant::lbfgs || v == Variant::fast_a || v == Variant::fast_b; }

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::budget_exhausted: return "budget-exhausted";
    case RunStatus::line_search_failure: return "line-search-failure";
    case RunStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

void OptimizerConfig::validate() const {
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) throw ConfigError("line search constants need 0 < c1 < c2 < 1");
  if (m < 1) throw ConfigError("memory m must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_nfg < 1) throw ConfigError("max_nfg must be >= 1");
  if (!(tau_init > 0.0)) throw ConfigError("tau_init must be positive");
  if (line_search_max_evals < 1) throw ConfigError("line search needs at least one evaluation");
}

bool bfgs_inverse_update(Matrix& h, const Vector& s, const Vector& y) {
  const double sty = s.dot(y);
  if (!(sty > kCurvatureSkipRatio * s.norm() * y.norm())) return false;
  const double rho = 1.0 / sty;
  // (I - rho s y') H (I - rho y s') expanded to keep the cost at O(n^2).
  const Vector hy = h * y;
  const double yhy = y.dot(hy);
  h.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
  h.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
  return true;
}

Vector two_loop(const std::vector<Vector>& s, const std::vector<Vector>& y, const Vector& g, double gamma) {
  const std::size_t k = s.size();
  std::vector<double> a(k), rho(k);
  Vector q = g;
  for (std::size_t i = k; i-- > 0;) {
    rho[i] = 1.0 / s[i].dot(y[i]);
    a[i] = rho[i] * s[i].dot(q);
    q.noalias() -= a[i] * y[i];
  }
  Vector r = gamma * q;
  for (std::size_t i = 0; i < k; ++i) {
    const double b = rho[i] * y[i].dot(r);
    r.noalias() += (a[i] - b) * s[i];
  }
  return r;
}

namespace {

struct Step {
  Vector p;
  double alpha = 0.0;
  int hvp_evals = 0;
};

// Shared outer loop: evaluation accounting, convergence test, strong Wolfe
// search with one steepest-descent retry, and trace bookkeeping. `Method`
// supplies direction(k, x, g, objective), allows_fallback(k) and
// update(k, ...).
template <class Method>
Trace drive(const Problem& problem, const OptimizerConfig& config, Method& method) {
  config.validate();
  CountedObjective objective(problem, config.max_nfg);
  const LineSearchOptions ls = config.line_search();

  Trace trace;
  Vector x = problem.x0();
  Vector g;
  auto finish = [&](RunStatus status) {
    trace.status = status;
    trace.final_x = x;
    trace.nfg = objective.nfg();
    return trace;
  };

  double f = 0.0;
  try {
    f = objective.value_and_gradient(x, g);
  } catch (const BudgetExhausted&) {
    trace.iterates.push_back({0, std::nan(""), std::nan(""), 0.0, 0.0, 0});
    return finish(RunStatus::budget_exhausted);
  }
  trace.iterates.push_back({0, f, g.norm(), 0.0, 0.0, objective.nfg()});

  Vector x_trial, g_trial;
  double f_trial = 0.0, tau_trial = -1.0;
  try {
    for (long k = 0;; ++k) {
      if (!(g.norm() >= config.tol)) {
        return finish(std::isfinite(g.norm()) ? RunStatus::converged : RunStatus::line_search_failure);
      }
      if (config.max_iterations >= 0 && k >= config.max_iterations) return finish(RunStatus::iteration_limit);
      Step step = method.direction(k, x, g, objective);
      trace.hvp_evals += step.hvp_evals;

      std::optional<LineSearchResult> accepted;
      for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
        if (attempt == 1) {
          if (!method.allows_fallback(k)) break;
          if (step.alpha == 0.0 && step.p.isApprox(-g)) break;  // already steepest descent
          step.p = -g;
          step.alpha = 0.0;
        }
        const Vector& p = step.p;
        const LinePoint at_zero{f, g.dot(p)};
        LineFunction phi = [&](double tau) {
          x_trial = x + tau * p;
          f_trial = objective.value_and_gradient(x_trial, g_trial);
          tau_trial = tau;
          return LinePoint{f_trial, g_trial.dot(p)};
        };
        LineSearchResult r = strong_wolfe(phi, at_zero, ls);
        if (r.status == LineSearchStatus::converged) accepted = r;
      }
      if (!accepted) return finish(RunStatus::line_search_failure);
      if (tau_trial != accepted->tau) {
        // The search always ends on the accepted point; keep this honest.
        x_trial = x + accepted->tau * step.p;
        f_trial = objective.value_and_gradient(x_trial, g_trial);
      }

      // tau p rather than x_trial - x: the difference of two nearby iterates
      // loses digits once steps are small compared to x.
      Vector s = accepted->tau * step.p;
      Vector y = g_trial - g;
      Vector x_prev = std::move(x);
      x = x_trial;
      g = g_trial;
      f = f_trial;
      method.update(k, x_prev, x, g, accepted->tau, s, y);
      trace.iterates.push_back({k + 1, f, g.norm(), accepted->tau, step.alpha, objective.nfg()});
    }
  } catch (const BudgetExhausted&) {
    return finish(RunStatus::budget_exhausted);
  }
}

class FastBfgsMethod {
 public:
  FastBfgsMethod(const Problem& problem, const OptimizerConfig& config, const Observer& observer)
      : config_(config), observer_(observer), state_(problem.dim(), config.m) {
    if (config.variant != Variant::fast_a && config.variant != Variant::fast_b) {
      throw ConfigError("fast_bfgs requires variant fast-a or fast-b");
    }
  }

  Step direction(long k, const Vector& x, const Vector& g, CountedObjective& objective) {
    correction_ = Correction{Vector::Zero(g.size()), 0.0, 0};
    if (state_.empty()) return {-g, 0.0};
    const Vector hg = state_.apply(g);
    const bool constrained = config_.constrained_mode && k >= config_.free_iterations;
    if (!constrained) {
      const GradientFn grad = objective.gradient_fn();
      correction_ = config_.variant == Variant::fast_a ? ver_a(g, hg, grad, x) : ver_b(g, hg, grad, x);
    }
    Step step{-hg, correction_.alpha, correction_.hvp_evals};
    if (correction_.alpha != 0.0) step.p.noalias() -= correction_.alpha * correction_.v;
    return step;
  }

  // A steepest-descent retry would leave the subspace a constrained run is
  // confined to.
  bool allows_fallback(long k) const { return !(config_.constrained_mode && k >= config_.free_iterations); }

  void update(long k, const Vector& x_prev, const Vector& x, const Vector& g, double tau, const Vector& s,
              const Vector& y) {
    const auto pair = rescale_pair(s, y);
    AbsorbInfo info;
    if (pair && config_.reorder_eviction && state_.size() == state_.memory()) {
      state_.swap_columns(0, state_.best_eviction(pair->s_tilde));
    }
    if (pair) info = state_.absorb(*pair);
    if (observer_) {
      observer_(IterationView{k, x_prev, x, g, tau, s, y, correction_, state_, pair ? &info : nullptr});
    }
  }

 private:
  const OptimizerConfig& config_;
  const Observer& observer_;
  SubspaceState state_;
  Correction correction_;
};

class DenseBfgsMethod {
 public:
  DenseBfgsMethod(const Problem& problem, const OptimizerConfig& config) {
    if (problem.dim() > config.dense_limit) {
      throw CapacityError("dense BFGS limited to n <= " + std::to_string(config.dense_limit) + ", got " +
                          std::to_string(problem.dim()));
    }
    h_ = Matrix::Identity(problem.dim(), problem.dim());
  }

  Step direction(long, const Vector&, const Vector& g, CountedObjective&) { return {-(h_ * g), 0.0}; }
  bool allows_fallback(long) const { return true; }

  void update(long, const Vector&, const Vector&, const Vector&, double, const Vector& s, const Vector& y) {
    bfgs_inverse_update(h_, s, y);
  }

 private:
  Matrix h_;
};

class LbfgsMethod {
 public:
  explicit LbfgsMethod(const OptimizerConfig& config) : m_(static_cast<std::size_t>(config.m)) {}

  Step direction(long, const Vector&, const Vector& g, CountedObjective&) {
    if (s_.empty()) return {-g, 0.0};
    const Vector& s = s_.back();
    const Vector& y = y_.back();
    return {-two_loop(s_, y_, g, s.dot(y) / y.dot(y)), 0.0};
  }
  bool allows_fallback(long) const { return true; }

  void update(long, const Vector&, const Vector&, const Vector&, double, const Vector& s, const Vector& y) {
    if (!(s.dot(y) > kCurvatureSkipRatio * s.norm() * y.norm())) return;
    if (s_.size() == m_) {
      s_.erase(s_.begin());
      y_.erase(y_.begin());
    }
    s_.push_back(s);
    y_.push_back(y);
  }

 private:
  std::size_t m_;
  std::vector<Vector> s_, y_;
};

class GradientDescentMethod {
 public:
  Step direction(long, const Vector&, const Vector& g, CountedObjective&) { return {-g, 0.0}; }
  bool allows_fallback(long) const { return true; }
  void update(long, const Vector&, const Vector&, const Vector&, double, const Vector&, const Vector&) {}
};

}  // namespace

Trace fast_bfgs(const Problem& problem, const OptimizerConfig& config, const Observer& observer) {
  config.validate();
  FastBfgsMethod method(problem, config, observer);
  return drive(problem, config, method);
}

Trace bfgs(const Problem& problem, const OptimizerConfig& config) {
  config.validate();
  DenseBfgsMethod method(problem, config);
  return drive(problem, config, method);
}

Trace lbfgs(const Problem& problem, const OptimizerConfig& config) {
  LbfgsMethod method(config);
  return drive(problem, config, method);
}

Trace gd(const Problem& problem, const OptimizerConfig& config) {
  GradientDescentMethod method;
  return drive(problem, config, method);
}

Trace minimize(const Problem& problem, const OptimizerConfig& config) {
  switch (config.variant) {
    case Variant::gd: return gd(problem, config);
    case Variant::bfgs: return bfgs(problem, config);
    case Variant::lbfgs: return lbfgs(problem, config);
    case Variant::fast_a:
    case Variant::fast_b: return fast_bfgs(problem, config);
  }
  throw ConfigError("unknown variant");
}

}  // namespace fastbfgs
