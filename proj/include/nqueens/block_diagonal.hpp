#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "nqueens/parallel.hpp"
#include "nqueens/sparse_matrix.hpp"

namespace nqueens {

/// Symmetric block-diagonal matrix with 1x1 and contiguous 2x2 blocks.
///
/// `diagonal()` holds the 1x1 blocks and is exactly zero on the two slots of
/// every 2x2 block, so it can be fed straight to weighted_gram_apply for the
/// separable part of a product.
template <typename Scalar>
class BlockDiagonal {
 public:
  struct Pair {
    Index first;  // block occupies (first, first + 1)
    Scalar a, b, c;  // [[a, b], [b, c]]
  };

  BlockDiagonal() = default;
  explicit BlockDiagonal(Index size) : diag_(VectorX<Scalar>::Zero(size)) {}
  BlockDiagonal(VectorX<Scalar> diag, std::vector<Pair> pairs)
      : diag_(std::move(diag)), pairs_(std::move(pairs)) {}

  Index size() const { return diag_.size(); }
  const VectorX<Scalar>& diagonal() const { return diag_; }
  VectorX<Scalar>& diagonal() { return diag_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  std::vector<Pair>& pairs() { return pairs_; }

  template <typename Derived>
  VectorX<Scalar> apply(const Eigen::MatrixBase<Derived>& v) const {
    if (v.size() != size()) throw std::invalid_argument("BlockDiagonal::apply: dimension mismatch");
    VectorX<Scalar> out = diag_.cwiseProduct(v);
    for (const auto& p : pairs_) {
      const Scalar x0 = v[p.first], x1 = v[p.first + 1];
      out[p.first] = p.a * x0 + p.b * x1;
      out[p.first + 1] = p.b * x0 + p.c * x1;
    }
    return out;
  }

  /// Blockwise inverse. Throws std::domain_error when a 1x1 block is not
  /// positive or a 2x2 block is not positive definite.
  BlockDiagonal inverse() const {
    BlockDiagonal inv(size());
    Index zero_slots = 0;
    const Index n = size();
    for (Index i = 0; i < n; ++i) {
      const Scalar d = diag_[i];
      if (d > Scalar(0))
        inv.diag_[i] = Scalar(1) / d;
      else if (d == Scalar(0))
        ++zero_slots;
      else
        throw std::domain_error("BlockDiagonal::inverse: non-positive 1x1 block");
    }
    if (zero_slots != 2 * static_cast<Index>(pairs_.size()))
      throw std::domain_error("BlockDiagonal::inverse: singular 1x1 block");
    inv.pairs_.reserve(pairs_.size());
    for (const auto& p : pairs_) {
      const Scalar det = p.a * p.c - p.b * p.b;
      if (!(p.a > Scalar(0)) || !(det > Scalar(0)))
        throw std::domain_error("BlockDiagonal::inverse: 2x2 block lost positive definiteness");
      inv.pairs_.push_back({p.first, p.c / det, -p.b / det, p.a / det});
    }
    return inv;
  }

  MatrixX<Scalar> toDense() const {
    MatrixX<Scalar> m = diag_.asDiagonal();
    for (const auto& p : pairs_) {
      m(p.first, p.first) = p.a;
      m(p.first, p.first + 1) = p.b;
      m(p.first + 1, p.first) = p.b;
      m(p.first + 1, p.first + 1) = p.c;
    }
    return m;
  }

 private:
  VectorX<Scalar> diag_;
  std::vector<Pair> pairs_;
};

/// A H A^T y for block-diagonal H, one pass over the columns plus a fix-up for
/// the 2x2 blocks.
template <typename Scalar, typename StorageIndex, typename Derived>
VectorX<Scalar> sandwich_apply(const SparseMatrix<Scalar, StorageIndex>& A,
                               const BlockDiagonal<Scalar>& H,
                               const Eigen::MatrixBase<Derived>& y_in) {
  const VectorX<Scalar> y = y_in;
  VectorX<Scalar> out = weighted_gram_apply(A, H.diagonal(), y);
  for (const auto& p : H.pairs()) {
    const Scalar t0 = A.columnDot(p.first, y.data());
    const Scalar t1 = A.columnDot(p.first + 1, y.data());
    A.addColumn(p.first, p.a * t0 + p.b * t1, out.data());
    A.addColumn(p.first + 1, p.b * t0 + p.c * t1, out.data());
  }
  return out;
}

}  // namespace nqueens
