#include "fastbfgs/subspace.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "fastbfgs/errors.hpp"

namespace fastbfgs {

std::optional<CurvaturePair> rescale_pair(const Vector& s, const Vector& y) {
  if (s.size() != y.size()) throw DimensionError("rescale_pair: s and y differ in length");
  const double sty = s.dot(y);
  const double scale = s.norm() * y.norm();
  if (!std::isfinite(sty) || !(std::abs(sty) >= kCurvatureSkipRatio * scale) || sty == 0.0) {
    return std::nullopt;
  }
  const double inv = 1.0 / std::sqrt(std::abs(sty));
  return CurvaturePair{s * inv, y * inv, sty};
}

Matrix build_transition(const Vector& t, const Vector& yts) {
  const Eigen::Index m = t.size();
  if (m < 1 || yts.size() != m) {
    throw DimensionError("build_transition: t and yts must share a positive length");
  }
  Matrix tk = Matrix::Zero(m, m);
  tk.col(0) = t;
  tk(m - 1, 0) -= yts(0);
  for (Eigen::Index j = 1; j < m; ++j) {
    tk(j - 1, j) = 1.0;
    tk(m - 1, j) = -yts(j);
  }
  return tk;
}

Vector solve_t(const Matrix& s_next, const Vector& target) {
  if (s_next.rows() != target.size()) throw DimensionError("solve_t: row count mismatch");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(1e-12);
  cod.compute(s_next);
  return cod.solve(target);
}

SubspaceState::SubspaceState(Eigen::Index n, int m) : n_(n), m_(m) {
  if (n < 1) throw DimensionError("SubspaceState: n must be positive");
  if (m < 1) throw ConfigError("SubspaceState: memory m must be positive");
  s_.resize(n_, m_);
}

Eigen::Ref<const Vector> SubspaceState::column(int j) const { return s_.col(physical(j)); }

Matrix SubspaceState::columns() const {
  Matrix out(n_, size_);
  for (int j = 0; j < size_; ++j) out.col(j) = column(j);
  return out;
}

Vector SubspaceState::inner_products(const Vector& y_tilde) const {
  Vector out(size_);
  for (int j = 0; j < size_; ++j) out(j) = y_tilde.dot(column(j));
  return out;
}

void SubspaceState::symmetrize() {
  const Matrix sym = 0.5 * (l_ + l_.transpose());
  l_ = sym;
}

void SubspaceState::update_growing(const CurvaturePair& pair) {
  if (pair.s_tilde.size() != n_) throw DimensionError("update_growing: pair has wrong length");
  if (size_ >= m_) throw ConfigError("update_growing: memory already full");
  const int k = size_;
  Matrix next = Matrix::Zero(k + 1, k + 1);
  if (k == 0) {
    next(0, 0) = 1.0;
  } else {
    // B = [I; -y~'S~] is (k+1) x k; next = B L B' + e e'.
    const Vector w = inner_products(pair.y_tilde);  // S~'y~
    const Vector lw = l_ * w;
    next.topLeftCorner(k, k) = l_;
    next.block(0, k, k, 1) = -lw;
    next.block(k, 0, 1, k) = -lw.transpose();
    next(k, k) = w.dot(lw) + 1.0;
  }
  s_.col(physical(k)) = pair.s_tilde;
  ++size_;
  ++count_;
  l_ = std::move(next);
  symmetrize();
}

void SubspaceState::update_truncated(const CurvaturePair& pair, const Vector& t, const Vector& yts) {
  if (pair.s_tilde.size() != n_) throw DimensionError("update_truncated: pair has wrong length");
  if (size_ != m_) throw ConfigError("update_truncated: memory is not full");
  if (t.size() != m_ || yts.size() != m_) throw DimensionError("update_truncated: t/yts length != m");
  const Matrix tk = build_transition(t, yts);
  Matrix next = tk * l_ * tk.transpose();
  next(m_ - 1, m_ - 1) += 1.0;
  // Oldest slot becomes the newest.
  s_.col(head_) = pair.s_tilde;
  head_ = (head_ + 1) % m_;
  ++count_;
  l_ = std::move(next);
  symmetrize();
}

AbsorbInfo SubspaceState::absorb(const CurvaturePair& pair) {
  AbsorbInfo info;
  if (size_ < m_) {
    update_growing(pair);
    return info;
  }
  const Vector yts = inner_products(pair.y_tilde);
  const Vector evicted = column(0);
  Matrix next(n_, m_);
  for (int j = 1; j < m_; ++j) next.col(j - 1) = column(j);
  next.col(m_ - 1) = pair.s_tilde;
  info.t = solve_t(next, evicted);
  info.residual = (next * info.t - evicted).norm();
  info.truncated = true;
  update_truncated(pair, info.t, yts);
  return info;
}

void SubspaceState::swap_columns(int i, int j) {
  if (i < 0 || j < 0 || i >= size_ || j >= size_) throw DimensionError("swap_columns: index out of range");
  if (i == j) return;
  s_.col(physical(i)).swap(s_.col(physical(j)));
  l_.row(i).swap(l_.row(j));
  l_.col(i).swap(l_.col(j));
}

int SubspaceState::best_eviction(const Vector& s_new) const {
  if (size_ != m_) throw ConfigError("best_eviction: memory is not full");
  if (s_new.size() != n_) throw DimensionError("best_eviction: vector has wrong length");
  int best = 0;
  double best_sigma = -1.0;
  Matrix trial(n_, m_);
  for (int drop = 0; drop < m_; ++drop) {
    int c = 0;
    for (int j = 0; j < m_; ++j) {
      if (j != drop) trial.col(c++) = column(j).normalized();
    }
    trial.col(c) = s_new.normalized();
    const double sigma = Eigen::JacobiSVD<Matrix>(trial).singularValues().minCoeff();
    if (sigma > best_sigma) {
      best_sigma = sigma;
      best = drop;
    }
  }
  return best;
}

Vector SubspaceState::apply(const Vector& g) const {
  if (size_ == 0) throw EmptyStateError("apply: subspace state holds no curvature pairs");
  if (g.size() != n_) throw DimensionError("apply: vector has wrong length");
  Vector c(size_);
  for (int j = 0; j < size_; ++j) c(j) = column(j).dot(g);
  const Vector d = l_ * c;
  Vector out = Vector::Zero(n_);
  for (int j = 0; j < size_; ++j) out.noalias() += d(j) * column(j);
  return out;
}

std::size_t SubspaceState::stored_scalars() const {
  // s_, l_, and the five scalar fields n_, m_, count_, size_, head_.
  return static_cast<std::size_t>(s_.size() + l_.size()) + 5;
}

void SubspaceState::assign(const Matrix& columns, const Matrix& l, long count) {
  const auto k = columns.cols();
  if (columns.rows() != n_ || k > m_ || l.rows() != k || l.cols() != k) {
    throw DimensionError("assign: inconsistent snapshot shape");
  }
  if (count < k) throw DimensionError("assign: count smaller than number of columns");
  for (Eigen::Index j = 0; j < k; ++j) s_.col(j) = columns.col(j);
  head_ = 0;
  size_ = static_cast<int>(k);
  count_ = count;
  l_ = l;
  symmetrize();
}

}  // namespace fastbfgs
