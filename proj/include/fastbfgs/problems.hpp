#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fastbfgs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Returns f(x) and accumulates the gradient into grad, which the caller
/// hands over sized to n and zero-filled.
using ObjectiveFn = std::function<double(const Vector& x, Vector& grad)>;

/// A smooth unconstrained test objective with analytic gradient and a
/// standard starting point. Immutable after construction, so a single
/// instance may be evaluated from several threads at once.
class Problem {
 public:
  Problem(std::string name, Eigen::Index n, ObjectiveFn objective, Vector x0);

  const std::string& name() const { return name_; }
  Eigen::Index dim() const { return n_; }
  const Vector& x0() const { return x0_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  double value_and_gradient(const Vector& x, Vector& grad) const;

  /// Same objective with a different starting point.
  Problem with_x0(Vector x0) const;

 private:
  void check_dim(const Vector& x) const;

  std::string name_;
  Eigen::Index n_;
  ObjectiveFn objective_;
  Vector x0_;
};

struct ProblemInfo {
  std::string name;
  /// Dimensions used in the reference tables; any n accepted by the family
  /// rule (see min_dim / dim_multiple) is valid.
  std::vector<Eigen::Index> dims;
  Eigen::Index min_dim = 1;
  Eigen::Index dim_multiple = 1;
  /// True for the fourteen problems every benchmark preset relies on.
  bool core = true;
};

/// All registered families, core problems first, in table order.
std::vector<ProblemInfo> list_problems();

/// Builds a registered problem at dimension n.
/// Throws NameError for unknown names and DimensionError when n violates
/// the family rule; n is never silently rounded.
Problem get_problem(const std::string& name, Eigen::Index n);

/// Default table dimension for a registered name (first entry of dims).
Eigen::Index default_dim(const std::string& name);

/// Convenience for tests and examples: f(x) = 0.5 * x' A x - b' x.
Problem make_quadratic(const std::string& name, const Matrix& a, const Vector& b, Vector x0);

}  // namespace fastbfgs
