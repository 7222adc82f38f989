#include "nqueens/lower_problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nqueens/scalar_funcs.hpp"

namespace nqueens {

namespace {

Index checked_size(Index n) {
  if (n < 1) throw std::invalid_argument("lower problem: board size must be >= 1");
  return n;
}

ConstraintMatrix build_constraints(const BoardLayout& layout) {
  const Index n = layout.board_size();
  const Index rows = 6 * n - 1;
  // Row offsets (see class comment).
  const auto diag_row = [n](Index k) { return static_cast<int>(k + n); };
  const auto anti_row = [n](Index k) { return static_cast<int>(3 * n + k); };
  return ConstraintMatrix::fromColumns(
      rows, layout.size(),
      [&](Index c, auto& entries) {
        const auto pos = layout.locate(c);
        if (pos.is_slack) {
          // d_{-n}..d_{n-1} then a_{-n}..a_{n-1}; slack s sits in row s.
          entries.emplace_back(static_cast<int>(pos.i), 1.0);
          return;
        }
        const Index i = pos.i, j = pos.j;
        const bool ne = pos.triangle == Triangle::North || pos.triangle == Triangle::East;
        const bool nw = pos.triangle == Triangle::North || pos.triangle == Triangle::West;
        // N, E enter D_{k+1}; S, W enter D_k.
        entries.emplace_back(diag_row(diagonal_of(i, j) - (ne ? 1 : 0)), 1.0);
        // N, W enter A_{k+1}; S, E enter A_k.
        entries.emplace_back(anti_row(antidiagonal_of(n, i, j) - (nw ? 1 : 0)), 1.0);
        if (i >= 1) entries.emplace_back(static_cast<int>(4 * n + i - 1), 1.0);
        entries.emplace_back(static_cast<int>(5 * n - 1 + j), 1.0);
      },
      16 * n * n + 4 * n);
}

}  // namespace

LowerProblem::LowerProblem(Index n)
    : Problem(BoardLayout(checked_size(n), 4 * n), build_constraints(BoardLayout(checked_size(n), 4 * n)),
              Vector::Constant(6 * checked_size(n) - 1, 1.0 / static_cast<double>(n))),
      constant_(4.0 * std::log(static_cast<double>(n)) + 2.0 * std::log(2.0) + 3.0) {}

double LowerProblem::objective(const Vector& x) const {
  require_size(x, "LowerProblem::objective: dimension mismatch");
  require_nonnegative(x, "LowerProblem::objective: negative component");
  const double* xp = x.data();
  return parallel_sum(x.size(), [xp](Index i) { return xp[i] == 0.0 ? 0.0 : xp[i] * std::log(xp[i]); }) +
         constant_;
}

Vector LowerProblem::gradient(const Vector& x) const {
  require_size(x, "LowerProblem::gradient: dimension mismatch");
  require_positive(x, "LowerProblem::gradient: non-positive component");
  Vector grad(x.size());
  const Index p = x.size();
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (thread_count() > 1)
  for (Index i = 0; i < p; ++i) grad[i] = std::log(x[i]) + 1.0;
  return grad;
}

BlockDiagonal<double> LowerProblem::hessian(const Vector& x) const {
  require_size(x, "LowerProblem::hessian: dimension mismatch");
  require_positive(x, "LowerProblem::hessian: non-positive component");
  return BlockDiagonal<double>(x.cwiseInverse(), {});
}

Iterate LowerProblem::initial_point() const {
  const Index n = board_size();
  Vector x = Vector::Zero(num_variables());
  x.head(layout().triangle_count()).setConstant(1.0 / static_cast<double>(4 * n * n));
  const Vector row_mass = spmv(A(), x);
  // each slack has a single unit entry in its own row
  for (Index s = 0; s < 4 * n; ++s) x[layout().slack(s)] = b()[s] - row_mass[s];
  return {x, Vector::Zero(num_constraints()), 0};
}

double LowerProblem::dual(const Vector& nu) const {
  if (nu.size() != num_constraints()) throw std::invalid_argument("LowerProblem::dual: dimension mismatch");
  const Vector y = spmv_t(A(), nu);
  const double* yp = y.data();
  const double conj = parallel_sum(y.size(), [yp](Index i) { return neg_entropy_conj(-yp[i]); });
  if (!std::isfinite(conj)) return -std::numeric_limits<double>::infinity();
  CompensatedSum linear;
  for (Index r = 0; r < nu.size(); ++r) linear.add(nu[r] * b()[r]);
  return -linear.value() - conj + constant_;
}

}  // namespace nqueens
