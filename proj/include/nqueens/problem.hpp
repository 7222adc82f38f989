#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "nqueens/block_diagonal.hpp"
#include "nqueens/board.hpp"
#include "nqueens/sparse_matrix.hpp"

namespace nqueens {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ConstraintMatrix = SparseMatrix<double>;

/// Primal-dual point (x, nu) with iteration counter.
struct Iterate {
  Vector x;
  Vector nu;
  int k = 0;
};

/// Neumaier-compensated running sum; fixed summation order gives
/// reproducible objective and dual values.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sums f(i) for i in [0, count) with compensated per-thread partial sums that
/// are combined in thread order.
template <typename Fn>
double parallel_sum(Index count, Fn&& f) {
  const int threads = thread_count();
  if (threads <= 1) {
    CompensatedSum s;
    for (Index i = 0; i < count; ++i) s.add(f(i));
    return s.value();
  }
  std::vector<CompensatedSum> partial(static_cast<std::size_t>(threads));
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int t = 0; t < threads; ++t) {
    const Index begin = count * t / threads, end = count * (t + 1) / threads;
    for (Index i = begin; i < end; ++i) partial[t].add(f(i));
  }
  CompensatedSum s;
  for (const auto& p : partial) s.add(p);
  return s.value();
}

enum class ProblemKind { Lower, Upper, ApproxUpper };

std::string to_string(ProblemKind kind);

/// minimize f(x) subject to A x = b over x > 0, with f smooth, strictly convex
/// and a block-diagonal Hessian.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual ProblemKind kind() const = 0;

  /// f(x) for x >= 0; throws std::domain_error on a negative component.
  virtual double objective(const Vector& x) const = 0;
  /// Gradient for x > 0.
  virtual Vector gradient(const Vector& x) const = 0;
  /// Hessian for x > 0.
  virtual BlockDiagonal<double> hessian(const Vector& x) const = 0;
  /// Default starting point for the Newton iteration.
  virtual Iterate initial_point() const = 0;

  Vector hess_inv_apply(const Vector& x, const Vector& v) const {
    return hessian(x).inverse().apply(v);
  }

  Index board_size() const { return layout_.board_size(); }
  const BoardLayout& layout() const { return layout_; }
  const ConstraintMatrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  Index num_variables() const { return A_.cols(); }
  Index num_constraints() const { return A_.rows(); }

 protected:
  Problem(BoardLayout layout, ConstraintMatrix A, Vector b)
      : layout_(layout), A_(std::move(A)), b_(std::move(b)) {}

  static void require_nonnegative(const Vector& x, const char* what);
  static void require_positive(const Vector& x, const char* what);
  void require_size(const Vector& x, const char* what) const;

 private:
  BoardLayout layout_;
  ConstraintMatrix A_;
  Vector b_;
};

}  // namespace nqueens
