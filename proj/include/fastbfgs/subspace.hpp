#pragma once

#include <cstddef>
#include <optional>

#include "fastbfgs/problems.hpp"

namespace fastbfgs {

/// A curvature pair divided by sqrt(|s'y|), so that s~' y~ = sign(s'y).
struct CurvaturePair {
  Vector s_tilde;
  Vector y_tilde;
  /// s'y before rescaling.
  double sty = 0.0;
};

/// Pairs with |s'y| below this multiple of |s| |y| are skipped.
inline constexpr double kCurvatureSkipRatio = 1e-12;

/// Rescales (s, y) by 1/sqrt(|s'y|). Returns nullopt (curvature skip) when
/// |s'y| < kCurvatureSkipRatio * |s| |y|; the caller then leaves its state
/// untouched. Throws DimensionError on length mismatch.
std::optional<CurvaturePair> rescale_pair(const Vector& s, const Vector& y);

/// The m x m transition matrix used by the truncated update.
///
/// `t` holds the least-squares coordinates of the evicted step in the
/// surviving columns, `yts(j)` = y~_k' s~_{k-m+j} over the m columns stored
/// before the update (oldest first). Column 0 is (t_0, ..., t_{m-2},
/// t_{m-1} - yts(0)); columns 1..m-1 carry a shifted identity in rows
/// 0..m-2 and -yts(j) in the last row.
Matrix build_transition(const Vector& t, const Vector& yts);

/// Minimal-norm least-squares solution of min_t |S t - target|_2 using a
/// complete orthogonal decomposition with relative rank tolerance 1e-12.
Vector solve_t(const Matrix& s_next, const Vector& target);

/// What absorb() did with a pair.
struct AbsorbInfo {
  bool truncated = false;
  /// |S_next t - s_evicted|_2 for truncated updates, 0 otherwise.
  double residual = 0.0;
  Vector t;
};

/// Limited memory of the subspace quasi-Newton method:
///   H~ = S~ L~ S~'
/// with S~ the last min(count, m) rescaled steps and L~ a small symmetric
/// matrix.
///
/// Indexing contract: column j of S~ (j = 0 oldest) and row/column j of L~
/// refer to the same step. Storage is a ring buffer of m columns; `column(j)`
/// maps logical to physical slots, so eviction never moves data.
class SubspaceState {
 public:
  SubspaceState(Eigen::Index n, int m);

  Eigen::Index dim() const { return n_; }
  int memory() const { return m_; }
  /// Number of pairs absorbed since construction.
  long count() const { return count_; }
  /// Number of stored columns, min(count, m).
  int size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Logical column j, 0 = oldest.
  Eigen::Ref<const Vector> column(int j) const;
  const Matrix& L() const { return l_; }

  /// Stored columns in logical order as a dense n x size() matrix (tests and
  /// the verification harness only).
  Matrix columns() const;

  /// Grows the memory by one column with the exact BFGS recursion
  ///   L' = [I; -y~'S~] L [I, -S~'y~] + e e'.
  /// Requires size() < memory().
  void update_growing(const CurvaturePair& pair);

  /// Truncated update for a full memory: evicts the oldest column, appends
  /// s~ and sets L' = T(t) L T(t)' + e e'.
  /// `yts` must be y~' s~_j over the columns stored before the call.
  void update_truncated(const CurvaturePair& pair, const Vector& t, const Vector& yts);

  /// Chooses the growing or truncated update, computing t and yts itself.
  AbsorbInfo absorb(const CurvaturePair& pair);

  /// Exchanges logical columns i and j together with the matching rows and
  /// columns of L~. H~ is unchanged; the chronological order is not.
  void swap_columns(int i, int j);

  /// For a full memory: the stored column whose removal, with s_new
  /// appended, leaves the best conditioned set (largest smallest singular
  /// value after normalizing columns). Costs m thin SVDs of size n x m.
  int best_eviction(const Vector& s_new) const;

  /// y~' s~_j for each stored column.
  Vector inner_products(const Vector& y_tilde) const;

  /// S~ (L~ (S~' g)) in O(m n + m^2) work and O(m + n) extra memory.
  /// Throws EmptyStateError when nothing has been absorbed yet.
  Vector apply(const Vector& g) const;

  /// Scalars currently held by the state (ring buffer plus L~ plus the
  /// handful of bookkeeping fields).
  std::size_t stored_scalars() const;

  /// Installs explicit contents; columns in logical order. For fixtures.
  void assign(const Matrix& columns, const Matrix& l, long count);

 private:
  Eigen::Index physical(int j) const { return (head_ + j) % m_; }
  void symmetrize();

  Eigen::Index n_;
  int m_;
  long count_ = 0;
  int size_ = 0;
  int head_ = 0;  // physical slot of the oldest column
  Matrix s_;      // n x m ring buffer
  Matrix l_;      // size_ x size_
};

}  // namespace fastbfgs
