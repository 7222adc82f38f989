#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nqueens/parallel.hpp"

namespace nqueens {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar, typename StorageIndex = int>
struct Triplet {
  StorageIndex row;
  StorageIndex col;
  Scalar value;
};

/// Column-compressed sparse matrix specialised for wide constraint matrices
/// with very short columns (at most a handful of entries each).
///
/// Every product the Newton solver needs streams the columns once: A^T y is a
/// per-column gather, A x and A D A^T y are per-column scatters into a short
/// q-vector that stays in cache.
template <typename Scalar, typename StorageIndex = int>
class SparseMatrix {
 public:
  using Vector = VectorX<Scalar>;

  SparseMatrix() = default;

  /// Builds from unordered triplets. Duplicate (row, col) pairs and explicit
  /// zeros are rejected.
  SparseMatrix(Index rows, Index cols, std::vector<Triplet<Scalar, StorageIndex>> triplets)
      : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
    std::vector<StorageIndex> counts(static_cast<std::size_t>(cols) + 1, 0);
    for (const auto& t : triplets) {
      if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
        throw std::invalid_argument("SparseMatrix: triplet index out of range");
      if (t.value == Scalar(0)) throw std::invalid_argument("SparseMatrix: explicit zero entry");
      ++counts[static_cast<std::size_t>(t.col) + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    outer_ = counts;
    inner_.resize(triplets.size());
    values_.resize(triplets.size());
    std::vector<StorageIndex> fill(outer_.begin(), outer_.end() - 1);
    for (const auto& t : triplets) {
      const auto slot = static_cast<std::size_t>(fill[static_cast<std::size_t>(t.col)]++);
      inner_[slot] = t.row;
      values_[slot] = t.value;
    }
    finalize();
  }

  /// Builds column by column. `column(c, entries)` appends the (row, value)
  /// pairs of column c; entries may come in any row order.
  template <typename ColumnFn>
  static SparseMatrix fromColumns(Index rows, Index cols, ColumnFn&& column,
                                  Index reserve_nonzeros = 0) {
    SparseMatrix A;
    A.rows_ = rows;
    A.cols_ = cols;
    A.outer_.assign(1, 0);
    A.outer_.reserve(static_cast<std::size_t>(cols) + 1);
    A.inner_.reserve(static_cast<std::size_t>(reserve_nonzeros));
    A.values_.reserve(static_cast<std::size_t>(reserve_nonzeros));
    std::vector<std::pair<StorageIndex, Scalar>> entries;
    for (Index c = 0; c < cols; ++c) {
      entries.clear();
      column(c, entries);
      for (const auto& [r, v] : entries) {
        if (r < 0 || r >= rows) throw std::invalid_argument("SparseMatrix: row index out of range");
        if (v == Scalar(0)) throw std::invalid_argument("SparseMatrix: explicit zero entry");
        A.inner_.push_back(r);
        A.values_.push_back(v);
      }
      A.outer_.push_back(static_cast<StorageIndex>(A.inner_.size()));
    }
    A.finalize();
    return A;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nonZeros() const { return static_cast<Index>(values_.size()); }

  const std::vector<StorageIndex>& outerIndex() const { return outer_; }
  const std::vector<StorageIndex>& innerIndex() const { return inner_; }
  const std::vector<Scalar>& values() const { return values_; }

  Index colNonZeros(Index c) const { return outer_[c + 1] - outer_[c]; }

  std::vector<Index> rowNonZeros() const {
    std::vector<Index> counts(static_cast<std::size_t>(rows_), 0);
    for (auto r : inner_) ++counts[static_cast<std::size_t>(r)];
    return counts;
  }

  Scalar coeff(Index r, Index c) const {
    for (auto k = outer_[c]; k < outer_[c + 1]; ++k)
      if (inner_[k] == r) return values_[k];
    return Scalar(0);
  }

  MatrixX<Scalar> toDense() const {
    MatrixX<Scalar> dense = MatrixX<Scalar>::Zero(rows_, cols_);
    for (Index c = 0; c < cols_; ++c)
      for (auto k = outer_[c]; k < outer_[c + 1]; ++k) dense(inner_[k], c) = values_[k];
    return dense;
  }

  /// (A^T y)_c for a single column.
  Scalar columnDot(Index c, const Scalar* y) const {
    Scalar sum(0);
    for (auto k = outer_[c]; k < outer_[c + 1]; ++k) sum += values_[k] * y[inner_[k]];
    return sum;
  }

  /// out += alpha * A[:, c]
  void addColumn(Index c, Scalar alpha, Scalar* out) const {
    for (auto k = outer_[c]; k < outer_[c + 1]; ++k) out[inner_[k]] += values_[k] * alpha;
  }

  /// Splits the columns into `parts` contiguous ranges; range t is
  /// [bounds[t], bounds[t+1]).
  std::vector<Index> columnPartition(int parts) const {
    std::vector<Index> bounds(static_cast<std::size_t>(parts) + 1);
    for (int t = 0; t <= parts; ++t) bounds[t] = cols_ * t / parts;
    return bounds;
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<StorageIndex> outer_{0};
  std::vector<StorageIndex> inner_;
  std::vector<Scalar> values_;

  // Sorts each (short) column by row and rejects duplicates.
  void finalize() {
    for (Index c = 0; c < cols_; ++c) {
      const auto begin = static_cast<std::size_t>(outer_[c]);
      const auto end = static_cast<std::size_t>(outer_[c + 1]);
      for (auto k = begin + 1; k < end; ++k) {
        const auto r = inner_[k];
        const auto v = values_[k];
        auto m = k;
        while (m > begin && inner_[m - 1] > r) {
          inner_[m] = inner_[m - 1];
          values_[m] = values_[m - 1];
          --m;
        }
        inner_[m] = r;
        values_[m] = v;
      }
      for (auto k = begin + 1; k < end; ++k)
        if (inner_[k] == inner_[k - 1]) throw std::invalid_argument("SparseMatrix: duplicate entry");
    }
  }
};

namespace detail {

inline void check_dims(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

/// Runs `scatter(begin, end, out)` over column ranges and sums the per-thread
/// q-vectors in thread order, so the result only depends on the thread count.
template <typename Scalar, typename StorageIndex, typename Scatter>
VectorX<Scalar> scatter_reduce(const SparseMatrix<Scalar, StorageIndex>& A, Scatter&& scatter) {
  const int threads = thread_count();
  if (threads <= 1) {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(A.rows());
    scatter(Index(0), A.cols(), out.data());
    return out;
  }
  const auto bounds = A.columnPartition(threads);
  MatrixX<Scalar> partial = MatrixX<Scalar>::Zero(A.rows(), threads);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int t = 0; t < threads; ++t) scatter(bounds[t], bounds[t + 1], partial.col(t).data());
  VectorX<Scalar> out = partial.col(0);
  for (int t = 1; t < threads; ++t) out += partial.col(t);
  return out;
}

}  // namespace detail

/// y = A x
template <typename Scalar, typename StorageIndex, typename Derived>
VectorX<Scalar> spmv(const SparseMatrix<Scalar, StorageIndex>& A,
                     const Eigen::MatrixBase<Derived>& x_in) {
  detail::check_dims(x_in.size() == A.cols(), "spmv: dimension mismatch");
  const VectorX<Scalar>& x = x_in.derived();
  const Scalar* xp = x.data();
  return detail::scatter_reduce(A, [&](Index begin, Index end, Scalar* out) {
    for (Index c = begin; c < end; ++c) A.addColumn(c, xp[c], out);
  });
}

/// x = A^T y
template <typename Scalar, typename StorageIndex, typename Derived>
VectorX<Scalar> spmv_t(const SparseMatrix<Scalar, StorageIndex>& A,
                       const Eigen::MatrixBase<Derived>& y_in) {
  detail::check_dims(y_in.size() == A.rows(), "spmv_t: dimension mismatch");
  const VectorX<Scalar> y = y_in;
  VectorX<Scalar> out(A.cols());
  const Scalar* yp = y.data();
  const Index cols = A.cols();
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (thread_count() > 1)
  for (Index c = 0; c < cols; ++c) out[c] = A.columnDot(c, yp);
  return out;
}

/// A diag(d) A^T y in a single pass over the columns.
template <typename Scalar, typename StorageIndex, typename DerivedD, typename DerivedY>
VectorX<Scalar> weighted_gram_apply(const SparseMatrix<Scalar, StorageIndex>& A,
                                    const Eigen::MatrixBase<DerivedD>& d_in,
                                    const Eigen::MatrixBase<DerivedY>& y_in) {
  detail::check_dims(d_in.size() == A.cols() && y_in.size() == A.rows(),
                     "weighted_gram_apply: dimension mismatch");
  const auto& d = d_in.derived();
  const VectorX<Scalar> y = y_in;
  const Scalar* yp = y.data();
  return detail::scatter_reduce(A, [&](Index begin, Index end, Scalar* out) {
    for (Index c = begin; c < end; ++c) {
      const Scalar w = d[c];
      if (w == Scalar(0)) continue;
      A.addColumn(c, w * A.columnDot(c, yp), out);
    }
  });
}

/// Matrix Market coordinate dump. Integer-valued entries are written as exact
/// integers so external tools see the same matrix.
template <typename Scalar, typename StorageIndex>
void write_matrix_market(std::ostream& os, const SparseMatrix<Scalar, StorageIndex>& A) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  os.precision(17);
  const auto& outer = A.outerIndex();
  for (Index c = 0; c < A.cols(); ++c)
    for (auto k = outer[c]; k < outer[c + 1]; ++k) {
      const Scalar v = A.values()[k];
      os << A.innerIndex()[k] + 1 << ' ' << c + 1 << ' ';
      if (v == std::round(v))
        os << static_cast<long long>(v);
      else
        os << v;
      os << '\n';
    }
}

template <typename Derived>
void write_matrix_market_vector(std::ostream& os, const Eigen::MatrixBase<Derived>& b) {
  os << "%%MatrixMarket matrix array real general\n";
  os << b.size() << " 1\n";
  os.precision(17);
  for (Index i = 0; i < b.size(); ++i) os << b[i] << '\n';
}

}  // namespace nqueens
