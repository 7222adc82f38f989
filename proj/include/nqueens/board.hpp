#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace nqueens {

using Index = Eigen::Index;

namespace detail {
inline void check_offset(Index n, Index k) {
  if (k < -n || k > n)
    throw std::invalid_argument("diagonal offset " + std::to_string(k) + " outside [-" +
                                std::to_string(n) + ", " + std::to_string(n) + "]");
}
}  // namespace detail

/// Sum of the k-th diagonal of a square matrix: entries with i - j = k.
/// D_0 is the trace, D_1 sums Z(i, i-1), and D_{+-n} is empty.
template <typename Derived>
typename Derived::Scalar diag_sum(const Eigen::MatrixBase<Derived>& Z, Index k) {
  const Index n = Z.rows();
  if (Z.cols() != n) throw std::invalid_argument("diag_sum: matrix must be square");
  detail::check_offset(n, k);
  typename Derived::Scalar sum(0);
  for (Index i = std::max<Index>(0, k); i < std::min<Index>(n, n + k); ++i) sum += Z(i, i - k);
  return sum;
}

/// Sum of the k-th anti-diagonal of a square matrix: entries with
/// i + j = n - 1 - k. A_0 is the main anti-diagonal, A_{-1} sums Z(n-i, i).
template <typename Derived>
typename Derived::Scalar antidiag_sum(const Eigen::MatrixBase<Derived>& Z, Index k) {
  const Index n = Z.rows();
  if (Z.cols() != n) throw std::invalid_argument("antidiag_sum: matrix must be square");
  detail::check_offset(n, k);
  const Index s = n - 1 - k;
  typename Derived::Scalar sum(0);
  for (Index i = std::max<Index>(0, s - (n - 1)); i <= std::min<Index>(n - 1, s); ++i)
    sum += Z(i, s - i);
  return sum;
}

/// Offset of the diagonal through (i, j) and of the anti-diagonal through (i, j).
constexpr Index diagonal_of(Index i, Index j) { return i - j; }
constexpr Index antidiagonal_of(Index n, Index i, Index j) { return n - 1 - i - j; }

enum class Triangle { North = 0, East = 1, South = 2, West = 3 };

/// Flat variable numbering shared by every problem: the four n x n triangle
/// matrices N, E, S, W (row-major, 0-indexed) followed by problem-specific
/// slack variables.
class BoardLayout {
 public:
  struct Position {
    bool is_slack = false;
    Triangle triangle = Triangle::North;
    Index i = 0;  // row, or slack ordinal when is_slack
    Index j = 0;
    bool operator==(const Position&) const = default;
  };

  BoardLayout() = default;
  BoardLayout(Index n, Index slack_count) : n_(n), slacks_(slack_count) {
    if (n < 1) throw std::invalid_argument("BoardLayout: board size must be >= 1");
    if (slack_count < 0) throw std::invalid_argument("BoardLayout: negative slack count");
  }

  Index board_size() const { return n_; }
  Index triangle_count() const { return 4 * n_ * n_; }
  Index slack_count() const { return slacks_; }
  Index size() const { return triangle_count() + slacks_; }

  Index triangle(Triangle t, Index i, Index j) const {
    return static_cast<Index>(t) * n_ * n_ + i * n_ + j;
  }
  Index slack(Index ordinal) const { return triangle_count() + ordinal; }

  Index index(const Position& pos) const {
    return pos.is_slack ? slack(pos.i) : triangle(pos.triangle, pos.i, pos.j);
  }

  Position locate(Index flat) const {
    if (flat < 0 || flat >= size()) throw std::out_of_range("BoardLayout: index out of range");
    Position pos;
    if (flat >= triangle_count()) {
      pos.is_slack = true;
      pos.i = flat - triangle_count();
      return pos;
    }
    const Index nn = n_ * n_;
    pos.triangle = static_cast<Triangle>(flat / nn);
    pos.i = (flat % nn) / n_;
    pos.j = flat % n_;
    return pos;
  }

  /// View of one triangle matrix inside a flat vector.
  template <typename Vector>
  auto grid(Vector& x, Triangle t) const {
    using Scalar = typename std::remove_const_t<Vector>::Scalar;
    using Grid = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using Map = std::conditional_t<std::is_const_v<Vector>, Eigen::Map<const Grid>, Eigen::Map<Grid>>;
    return Map(x.data() + triangle(t, 0, 0), n_, n_);
  }

 private:
  Index n_ = 1;
  Index slacks_ = 0;
};

}  // namespace nqueens
