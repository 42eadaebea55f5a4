#pragma once

#include <functional>

#include "fastbfgs/problems.hpp"

namespace fastbfgs {

/// Thrown by CountedObjective when a further evaluation would exceed the
/// budget. Optimizers translate it into a budget-exhausted trace.
class BudgetExhausted : public std::exception {
 public:
  const char* what() const noexcept override { return "evaluation budget exhausted"; }
};

/// Gradient evaluator handed to the correction routines.
using GradientFn = std::function<Vector(const Vector& x)>;

/// Counts function-and-gradient evaluations (nfg) against a hard budget.
/// Every evaluation computes f and its gradient together and counts once.
class CountedObjective {
 public:
  CountedObjective(const Problem& problem, long budget) : problem_(problem), budget_(budget) {}

  double value_and_gradient(const Vector& x, Vector& grad) {
    if (nfg_ >= budget_) throw BudgetExhausted();
    ++nfg_;
    return problem_.value_and_gradient(x, grad);
  }

  Vector gradient(const Vector& x) {
    Vector g;
    value_and_gradient(x, g);
    return g;
  }

  GradientFn gradient_fn() {
    return [this](const Vector& x) { return gradient(x); };
  }

  long nfg() const { return nfg_; }
  long budget() const { return budget_; }
  const Problem& problem() const { return problem_; }

 private:
  const Problem& problem_;
  long budget_;
  long nfg_ = 0;
};

}  // namespace fastbfgs
