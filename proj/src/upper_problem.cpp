#include "nqueens/upper_problem.hpp"

#include <cmath>
#include <stdexcept>

#include "nqueens/scalar_funcs.hpp"

namespace nqueens {

namespace {

Index checked_size(Index n) {
  if (n < 1) throw std::invalid_argument("upper problem: board size must be >= 1");
  return n;
}

// Offsets of the 6n - 2 line-sum rows relative to their first row. "line"
// rows sum over the first index i at fixed j, "cross" rows over j at fixed i.
struct SumRows {
  Index n;
  Index north_line(Index j) const { return j; }
  Index south_line(Index j) const { return n + j; }
  Index north_south_cross(Index i) const { return 2 * n + i - 1; }  // i >= 1
  Index east_cross(Index i) const { return 3 * n - 1 + i; }
  Index west_cross(Index i) const { return 4 * n - 1 + i; }
  Index east_west_line(Index j) const { return 5 * n + j - 2; }  // j >= 1
  Index count() const { return 6 * n - 2; }

  template <typename Entries>
  void append(Triangle t, Index i, Index j, Index base, Entries& entries) const {
    const auto push = [&](Index row) { entries.emplace_back(static_cast<int>(base + row), 1.0); };
    switch (t) {
      case Triangle::North:
        push(north_line(j));
        if (i >= 1) push(north_south_cross(i));
        break;
      case Triangle::South:
        push(south_line(j));
        if (i >= 1) push(north_south_cross(i));
        break;
      case Triangle::East:
        push(east_cross(i));
        if (j >= 1) push(east_west_line(j));
        break;
      case Triangle::West:
        push(west_cross(i));
        if (j >= 1) push(east_west_line(j));
        break;
    }
  }

  void fill_rhs(Vector& b, Index base) const {
    const double nd = static_cast<double>(n);
    for (Index i = 0; i < n; ++i) {
      b[base + north_line(i)] = nd;
      b[base + south_line(i)] = nd;
      b[base + east_cross(i)] = nd;
      b[base + west_cross(i)] = nd;
    }
    for (Index i = 1; i < n; ++i) {
      b[base + north_south_cross(i)] = 2.0 * nd;
      b[base + east_west_line(i)] = 2.0 * nd;
    }
  }
};

ConstraintMatrix build_upper_constraints(Index n) {
  const BoardLayout layout(n, 8 * n - 4);
  const Index family = 2 * n - 1;
  const Index sum_base = 4 * family;
  const SumRows sums{n};
  const double scale = 2.0 * static_cast<double>(n);
  const auto row_of = [&](Index fam, Index k) { return static_cast<int>(fam * family + k + n - 1); };
  enum { kSW = 0, kNE = 1, kSE = 2, kNW = 3 };
  return ConstraintMatrix::fromColumns(
      sum_base + sums.count(), layout.size(),
      [&](Index c, auto& entries) {
        const auto pos = layout.locate(c);
        if (pos.is_slack) {
          // Interleaved slack ordinal -> (family, k).
          const Index s = pos.i % (2 * family);
          const bool anti = pos.i >= 2 * family;
          const bool even = s % 2 == 0;  // d^NE / a^NW
          const Index k = even ? s / 2 - n + 1 : (s + 1) / 2 - n;
          const Index fam = anti ? (even ? kNW : kSE) : (even ? kNE : kSW);
          entries.emplace_back(row_of(fam, k), scale);
          return;
        }
        const Index i = pos.i, j = pos.j;
        const Index dk = diagonal_of(i, j), ak = antidiagonal_of(n, i, j);
        switch (pos.triangle) {
          case Triangle::North:
            entries.emplace_back(row_of(kNE, dk), 1.0);
            entries.emplace_back(row_of(kNW, ak), 1.0);
            break;
          case Triangle::East:
            entries.emplace_back(row_of(kNE, dk), 1.0);
            entries.emplace_back(row_of(kSE, ak), 1.0);
            break;
          case Triangle::South:
            entries.emplace_back(row_of(kSW, dk), 1.0);
            entries.emplace_back(row_of(kSE, ak), 1.0);
            break;
          case Triangle::West:
            entries.emplace_back(row_of(kSW, dk), 1.0);
            entries.emplace_back(row_of(kNW, ak), 1.0);
            break;
        }
        sums.append(pos.triangle, i, j, sum_base, entries);
      },
      16 * n * n + 8 * n);
}

Vector build_upper_rhs(Index n) {
  const Index sum_base = 4 * (2 * n - 1);
  Vector b(sum_base + 6 * n - 2);
  b.head(sum_base).setConstant(2.0 * static_cast<double>(n));
  SumRows{n}.fill_rhs(b, sum_base);
  return b;
}

ConstraintMatrix build_approx_constraints(Index n) {
  const BoardLayout layout(n, 4 * n);
  const Index sum_base = 4 * n;
  const SumRows sums{n};
  const double scale = 4.0 * static_cast<double>(n);
  const auto d_row = [n](Index k) { return static_cast<int>(k + n - 1); };
  const auto a_row = [n](Index k) { return static_cast<int>(3 * n + k - 1); };
  return ConstraintMatrix::fromColumns(
      sum_base + sums.count(), layout.size(),
      [&](Index c, auto& entries) {
        const auto pos = layout.locate(c);
        if (pos.is_slack) {
          entries.emplace_back(static_cast<int>(pos.i), scale);
          return;
        }
        const Index i = pos.i, j = pos.j;
        const Index dk = diagonal_of(i, j), ak = antidiagonal_of(n, i, j);
        const bool ne = pos.triangle == Triangle::North || pos.triangle == Triangle::East;
        const bool nw = pos.triangle == Triangle::North || pos.triangle == Triangle::West;
        // d_k collects D_{k-1}(S+W) and D_k(N+E); a_k collects A_{k-1}(S+E) and A_k(N+W).
        entries.emplace_back(d_row(ne ? dk : dk + 1), 1.0);
        entries.emplace_back(a_row(nw ? ak : ak + 1), 1.0);
        sums.append(pos.triangle, i, j, sum_base, entries);
      },
      16 * n * n + 4 * n);
}

Vector build_approx_rhs(Index n) {
  Vector b(10 * n - 2);
  b.head(4 * n).setConstant(4.0 * static_cast<double>(n));
  SumRows{n}.fill_rhs(b, 4 * n);
  return b;
}

double triangle_entropy(const Vector& x, Index count) {
  const double* xp = x.data();
  return parallel_sum(count, [xp](Index i) { return xp[i] == 0.0 ? 0.0 : xp[i] * std::log(xp[i]); });
}

void triangle_gradient(const Vector& x, Index count, double weight, Vector& grad) {
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (thread_count() > 1)
  for (Index i = 0; i < count; ++i) grad[i] = weight * (std::log(x[i]) + 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------

UpperProblem::UpperProblem(Index n)
    : Problem(BoardLayout(checked_size(n), 8 * n - 4), build_upper_constraints(checked_size(n)),
              build_upper_rhs(checked_size(n))) {}

double UpperProblem::objective(const Vector& x) const {
  require_size(x, "UpperProblem::objective: dimension mismatch");
  require_nonnegative(x, "UpperProblem::objective: negative component");
  const Index n = board_size();
  const double nd = static_cast<double>(n);
  const double tri = triangle_entropy(x, layout().triangle_count());
  CompensatedSum pairs;
  for (Index k = -n + 1; k <= n; ++k) {
    const double du = k == -n + 1 ? 1.0 : x[d_sw(k - 1)];
    const double dv = k == n ? 1.0 : x[d_ne(k)];
    pairs.add(pair_integral(du, dv));
    const double au = k == -n + 1 ? 1.0 : x[a_se(k - 1)];
    const double av = k == n ? 1.0 : x[a_nw(k)];
    pairs.add(pair_integral(au, av));
  }
  return 3.0 + tri / (4.0 * nd * nd) + pairs.value() / nd;
}

Vector UpperProblem::gradient(const Vector& x) const {
  require_size(x, "UpperProblem::gradient: dimension mismatch");
  require_positive(x, "UpperProblem::gradient: non-positive component");
  const Index n = board_size();
  const double nd = static_cast<double>(n);
  Vector grad = Vector::Zero(x.size());
  triangle_gradient(x, layout().triangle_count(), 1.0 / (4.0 * nd * nd), grad);
  const auto add_family = [&](auto lower_slot, auto upper_slot) {
    for (Index k = -n + 1; k <= n; ++k) {
      const bool has_u = k != -n + 1, has_v = k != n;
      const double u = has_u ? x[lower_slot(k - 1)] : 1.0;
      const double v = has_v ? x[upper_slot(k)] : 1.0;
      const auto g = pair_integral_grad(u, v);
      if (has_u) grad[lower_slot(k - 1)] += g[0] / nd;
      if (has_v) grad[upper_slot(k)] += g[1] / nd;
    }
  };
  add_family([this](Index k) { return d_sw(k); }, [this](Index k) { return d_ne(k); });
  add_family([this](Index k) { return a_se(k); }, [this](Index k) { return a_nw(k); });
  return grad;
}

BlockDiagonal<double> UpperProblem::hessian(const Vector& x) const {
  require_size(x, "UpperProblem::hessian: dimension mismatch");
  require_positive(x, "UpperProblem::hessian: non-positive component");
  const Index n = board_size();
  const double nd = static_cast<double>(n);
  BlockDiagonal<double> H(x.size());
  const Index tri = layout().triangle_count();
  H.diagonal().head(tri) = (4.0 * nd * nd * x.head(tri).array()).inverse().matrix();
  H.pairs().reserve(static_cast<std::size_t>(4 * n));
  const auto add_family = [&](auto lower_slot, auto upper_slot) {
    for (Index k = -n + 1; k <= n; ++k) {
      const bool has_u = k != -n + 1, has_v = k != n;
      const double u = has_u ? x[lower_slot(k - 1)] : 1.0;
      const double v = has_v ? x[upper_slot(k)] : 1.0;
      const auto h = pair_integral_hess(u, v);
      if (has_u && has_v)
        H.pairs().push_back({lower_slot(k - 1), h.uu / nd, h.uv / nd, h.vv / nd});
      else if (has_u)
        H.diagonal()[lower_slot(k - 1)] = h.uu / nd;
      else if (has_v)
        H.diagonal()[upper_slot(k)] = h.vv / nd;
    }
  };
  add_family([this](Index k) { return d_sw(k); }, [this](Index k) { return d_ne(k); });
  add_family([this](Index k) { return a_se(k); }, [this](Index k) { return a_nw(k); });
  return H;
}

Iterate UpperProblem::initial_point() const {
  return {Vector::Ones(num_variables()), Vector::Zero(num_constraints()), 0};
}

// ---------------------------------------------------------------------------

ApproxUpperProblem::ApproxUpperProblem(Index n)
    : Problem(BoardLayout(checked_size(n), 4 * n), build_approx_constraints(checked_size(n)),
              build_approx_rhs(checked_size(n))) {}

double ApproxUpperProblem::objective(const Vector& x) const {
  require_size(x, "ApproxUpperProblem::objective: dimension mismatch");
  require_nonnegative(x, "ApproxUpperProblem::objective: negative component");
  const double nd = static_cast<double>(board_size());
  const Index tri = layout().triangle_count();
  CompensatedSum slacks;
  for (Index s = tri; s < x.size(); ++s) slacks.add(neg_entropy(x[s]));
  return 3.0 + triangle_entropy(x, tri) / (4.0 * nd * nd) + slacks.value() / nd;
}

Vector ApproxUpperProblem::gradient(const Vector& x) const {
  require_size(x, "ApproxUpperProblem::gradient: dimension mismatch");
  require_positive(x, "ApproxUpperProblem::gradient: non-positive component");
  const double nd = static_cast<double>(board_size());
  const Index tri = layout().triangle_count();
  Vector grad(x.size());
  triangle_gradient(x, tri, 1.0 / (4.0 * nd * nd), grad);
  for (Index s = tri; s < x.size(); ++s) grad[s] = neg_entropy_d1(x[s]) / nd;
  return grad;
}

BlockDiagonal<double> ApproxUpperProblem::hessian(const Vector& x) const {
  require_size(x, "ApproxUpperProblem::hessian: dimension mismatch");
  require_positive(x, "ApproxUpperProblem::hessian: non-positive component");
  const double nd = static_cast<double>(board_size());
  const Index tri = layout().triangle_count();
  Vector d(x.size());
  d.head(tri) = (4.0 * nd * nd * x.head(tri).array()).inverse().matrix();
  d.tail(x.size() - tri) = (nd * x.tail(x.size() - tri).array()).inverse().matrix();
  return BlockDiagonal<double>(std::move(d), {});
}

Iterate ApproxUpperProblem::initial_point() const {
  return {Vector::Ones(num_variables()), Vector::Zero(num_constraints()), 0};
}

// ---------------------------------------------------------------------------

Iterate lift_approx_solution(const UpperProblem& exact, const ApproxUpperProblem& approx,
                             const Iterate& approx_solution) {
  if (exact.board_size() != approx.board_size())
    throw std::invalid_argument("lift_approx_solution: board sizes differ");
  if (approx_solution.x.size() != approx.num_variables() ||
      approx_solution.nu.size() != approx.num_constraints())
    throw std::invalid_argument("lift_approx_solution: dimension mismatch");
  const Index tri = exact.layout().triangle_count();
  if (!(approx_solution.x.head(tri).array() > 0.0).all())
    throw std::domain_error("lift_approx_solution: non-positive triangle coordinate");

  Iterate lifted{Vector::Zero(exact.num_variables()), Vector::Zero(exact.num_constraints()), 0};
  lifted.x.head(tri) = approx_solution.x.head(tri);

  // Each slack column of A has one entry (2n) in its own row; solve that row.
  const auto& A = exact.A();
  const Vector row_mass = spmv(A, lifted.x);
  for (Index c = tri; c < exact.num_variables(); ++c) {
    const auto slot = A.outerIndex()[c];
    const Index row = A.innerIndex()[slot];
    lifted.x[c] = (exact.b()[row] - row_mass[row]) / A.values()[slot];
    if (!(lifted.x[c] > 0.0))
      throw std::domain_error("lift_approx_solution: recomputed slack is not positive");
  }

  const Index shared = 6 * exact.board_size() - 2;
  lifted.nu.segment(exact.sum_rows_begin(), shared) =
      approx_solution.nu.segment(approx.sum_rows_begin(), shared);
  const Vector grad = exact.gradient(lifted.x);
  for (Index c = tri; c < exact.num_variables(); ++c) {
    const auto slot = A.outerIndex()[c];
    lifted.nu[A.innerIndex()[slot]] = -grad[c] / A.values()[slot];
  }
  return lifted;
}

}  // namespace nqueens
