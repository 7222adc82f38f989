#pragma once

#include "nqueens/problem.hpp"

namespace nqueens {

/// Entropy program whose optimal value L_n is a lower bound on the n-queens
/// constant.
///
/// Variables: N, E, S, W (n x n each), then the diagonal slacks
/// d_{-n} .. d_{n-1} and anti-diagonal slacks a_{-n} .. a_{n-1}
/// (p = 4n^2 + 4n).
///
/// Constraint rows, in order (q = 6n - 1), every right-hand side 1/n:
///   [0, 2n)        D_k(S+W) + D_{k+1}(N+E) + d_k = 1/n,   k = -n .. n-1
///   [2n, 4n)       A_k(S+E) + A_{k+1}(N+W) + a_k = 1/n,   k = -n .. n-1
///   [4n, 5n-1)     sum_j (N+E+S+W)(i, j) = 1/n,           i = 1 .. n-1
///   [5n-1, 6n-1)   sum_i (N+E+S+W)(i, j) = 1/n,           j = 0 .. n-1
/// The i = 0 row-sum constraint is dropped since the row and column sums are
/// dependent.
///
/// Objective: sum of g over every variable plus 4 log n + 2 log 2 + 3.
class LowerProblem final : public Problem {
 public:
  explicit LowerProblem(Index n);

  ProblemKind kind() const override { return ProblemKind::Lower; }

  double objective(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  BlockDiagonal<double> hessian(const Vector& x) const override;
  /// Uniform triangles 1/(4n^2), slacks from their defining rows, nu = 0.
  /// Exactly feasible and strictly positive.
  Iterate initial_point() const override;

  /// Lagrange dual function at the multiplier `nu` of the residual
  /// r_d = grad f + A^T nu, i.e. h(-nu) with h(y) = y^T b - f*(A^T y).
  /// A lower bound on L_n for every nu; overflow yields -infinity.
  double dual(const Vector& nu) const;

  double constant() const { return constant_; }

  Index diag_slack(Index k) const { return layout().slack(k + board_size()); }
  Index anti_slack(Index k) const { return layout().slack(3 * board_size() + k); }

  Index diag_row(Index k) const { return k + board_size(); }
  Index anti_row(Index k) const { return 3 * board_size() + k; }
  Index row_sum_row(Index i) const { return 4 * board_size() + i - 1; }
  Index col_sum_row(Index j) const { return 5 * board_size() - 1 + j; }

 private:
  double constant_;
};

}  // namespace nqueens
