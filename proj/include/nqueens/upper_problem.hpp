#pragma once

#include "nqueens/problem.hpp"

namespace nqueens {

/// Entropy program whose optimal value U_n is an upper bound on the n-queens
/// constant.
///
/// Variables: N, E, S, W, then the diagonal slacks interleaved as
///   d^NE_{-n+1}, (d^SW_{-n+1}, d^NE_{-n+2}), ..., (d^SW_{n-2}, d^NE_{n-1}), d^SW_{n-1}
/// and the anti-diagonal slacks a^NW / a^SE in the same pattern, so every
/// pair term of the objective occupies two adjacent coordinates
/// (p = 4n^2 + 8n - 4).
///
/// Constraint rows, in order (q = 14n - 6):
///   [0, 8n-4)  D_k(S+W) + 2n d^SW_k = 2n, then the d^NE (D_k(N+E)),
///              a^SE (A_k(S+E)) and a^NW (A_k(N+W)) families, k = -n+1 .. n-1
///   then       sum_i N_ij = n (all j), sum_i S_ij = n (all j),
///              sum_j (N+S)_ij = 2n (i = 1 .. n-1),
///              sum_j E_ij = n (all i), sum_j W_ij = n (all i),
///              sum_i (E+W)_ij = 2n (j = 1 .. n-1)
///   N and S are summed along the first index: with D_k over i - j = k this
///   is the orientation in which the program bounds the constant from above.
///
/// Objective: 3 + (1/4n^2) sum g(triangles)
///              + (1/n) sum_{k=-n+1}^{n} F(d^SW_{k-1}, d^NE_k)
///              + (1/n) sum_{k=-n+1}^{n} F(a^SE_{k-1}, a^NW_k)
/// with F the pair integral and d^SW_{-n} = d^NE_n = a^SE_{-n} = a^NW_n = 1.
class UpperProblem final : public Problem {
 public:
  explicit UpperProblem(Index n);

  ProblemKind kind() const override { return ProblemKind::Upper; }

  double objective(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  BlockDiagonal<double> hessian(const Vector& x) const override;
  /// All ones, nu = 0: interior but violates the slack rows.
  Iterate initial_point() const override;

  Index d_sw(Index k) const { return diag_base() + 2 * (k + board_size()) - 1; }
  Index d_ne(Index k) const { return diag_base() + 2 * (k + board_size() - 1); }
  Index a_se(Index k) const { return anti_base() + 2 * (k + board_size()) - 1; }
  Index a_nw(Index k) const { return anti_base() + 2 * (k + board_size() - 1); }

  Index d_sw_row(Index k) const { return k + board_size() - 1; }
  Index d_ne_row(Index k) const { return family() + k + board_size() - 1; }
  Index a_se_row(Index k) const { return 2 * family() + k + board_size() - 1; }
  Index a_nw_row(Index k) const { return 3 * family() + k + board_size() - 1; }
  /// First of the 6n - 2 row/column-sum rows.
  Index sum_rows_begin() const { return 4 * family(); }

 private:
  Index family() const { return 2 * board_size() - 1; }
  Index diag_base() const { return layout().triangle_count(); }
  Index anti_base() const { return layout().triangle_count() + family() * 2; }
};

/// Jensen approximation of UpperProblem: each pair integral
/// F(d^SW_{k-1}, d^NE_k) is replaced by g(d_k) with
/// d_k = (d^SW_{k-1} + d^NE_k) / 2, likewise for the anti-diagonals.
///
/// The original slacks carry no curvature once the integrals are gone, so
/// they are substituted out and only the averaged slacks remain:
/// variables N, E, S, W, d_{-n+1} .. d_n, a_{-n+1} .. a_n (p = 4n^2 + 4n).
///
/// Constraint rows (q = 10n - 2):
///   [0, 2n)    D_{k-1}(S+W) + D_k(N+E) + 4n d_k = 4n,  k = -n+1 .. n
///   [2n, 4n)   A_{k-1}(S+E) + A_k(N+W) + 4n a_k = 4n,  k = -n+1 .. n
///   then the 6n - 2 row/column-sum rows of UpperProblem, same order.
///
/// Objective: 3 + (1/4n^2) sum g(triangles) + (1/n) sum g(d_k) + (1/n) sum g(a_k).
class ApproxUpperProblem final : public Problem {
 public:
  explicit ApproxUpperProblem(Index n);

  ProblemKind kind() const override { return ProblemKind::ApproxUpper; }

  double objective(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  BlockDiagonal<double> hessian(const Vector& x) const override;
  /// All ones, nu = 0.
  Iterate initial_point() const override;

  Index d_avg(Index k) const { return layout().slack(k + board_size() - 1); }
  Index a_avg(Index k) const { return layout().slack(3 * board_size() + k - 1); }
  Index d_avg_row(Index k) const { return k + board_size() - 1; }
  Index a_avg_row(Index k) const { return 3 * board_size() + k - 1; }
  Index sum_rows_begin() const { return 4 * board_size(); }
};

/// Maps a solution of the approximate problem to a starting point for the
/// exact one. Triangles are copied; the interleaved slacks are recomputed from
/// their defining rows so the slack rows hold exactly. Duals of the shared
/// row/column-sum constraints are copied; duals of the slack rows are chosen
/// to zero the dual residual of the slack coordinates.
///
/// Throws std::domain_error if a copied or recomputed coordinate is not
/// strictly positive.
Iterate lift_approx_solution(const UpperProblem& exact, const ApproxUpperProblem& approx,
                             const Iterate& approx_solution);

}  // namespace nqueens
