#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nqueens/lower_problem.hpp"
#include "nqueens/newton.hpp"
#include "nqueens/upper_problem.hpp"
#include "oracles.hpp"

using namespace nqueens;
using oracle::Mat;
using oracle::Vec;

namespace {

// Column permutation from the dense oracle ordering (slack families stored
// one after another) to the interleaved library ordering.
std::vector<Index> upper_column_map(const UpperProblem& P) {
  const Index n = P.board_size(), tris = 4 * n * n, fam = 2 * n - 1;
  std::vector<Index> map(static_cast<std::size_t>(P.num_variables()));
  for (Index c = 0; c < tris; ++c) map[c] = c;
  for (Index k = -n + 1; k <= n - 1; ++k) {
    map[tris + 0 * fam + k + n - 1] = P.d_sw(k);
    map[tris + 1 * fam + k + n - 1] = P.d_ne(k);
    map[tris + 2 * fam + k + n - 1] = P.a_se(k);
    map[tris + 3 * fam + k + n - 1] = P.a_nw(k);
  }
  return map;
}

Vec to_library_order(const Vec& x, const std::vector<Index>& map) {
  Vec out(x.size());
  for (Index c = 0; c < x.size(); ++c) out[map[c]] = x[c];
  return out;
}

void check_gradient_fd(const Problem& P, std::mt19937_64& rng, double lo, double hi) {
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = oracle::random_positive(P.num_variables(), rng, lo, hi);
    const Vec g = P.gradient(x);
    const Vec fd = oracle::fd_gradient([&](const Vec& z) { return P.objective(z); }, x);
    CHECK((g - fd).norm() <= 1e-6 * fd.norm());
  }
}

// Inverts a finite-difference Hessian densely and compares it with
// hess_inv_apply column by column.
void check_hessian_inverse(const Problem& P, const Vec& x) {
  const Mat H = oracle::fd_jacobian([&](const Vec& z) { return P.gradient(z); }, x, 1e-3);
  const Mat Hinv_ref = H.inverse();
  Mat Hinv(x.size(), x.size());
  for (Index j = 0; j < x.size(); ++j) Hinv.col(j) = P.hess_inv_apply(x, Vec::Unit(x.size(), j));
  CHECK((Hinv - Hinv_ref).norm() <= 1e-8 * Hinv_ref.norm());
  CHECK((P.hessian(x).toDense() - H).norm() <= 1e-8 * H.norm());
}

void check_structure(const Problem& P, Index max_row_nnz, std::initializer_list<double> allowed) {
  const auto& A = P.A();
  for (Index c = 0; c < A.cols(); ++c) CHECK(A.colNonZeros(c) <= 4);
  for (Index count : A.rowNonZeros()) CHECK(count <= max_row_nnz);
  for (double v : A.values()) CHECK(std::find(allowed.begin(), allowed.end(), v) != allowed.end());
}

}  // namespace

TEST_CASE("lower problem: dimensions and structure") {
  for (Index n : {1, 2, 3, 5, 8}) {
    const LowerProblem P(n);
    CHECK(P.num_variables() == 4 * n * n + 4 * n);
    CHECK(P.num_constraints() == 6 * n - 1);
    check_structure(P, 4 * n, {1.0});
    Eigen::FullPivLU<Mat> lu(P.A().toDense());
    CHECK(lu.rank() == P.num_constraints());
  }
  CHECK_THROWS_AS(LowerProblem(0), std::invalid_argument);
}

TEST_CASE("lower problem agrees with the dense restatement") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 3, 4, 7}) {
    const LowerProblem P(n);
    const auto ref = oracle::dense_lower_program(n);
    CHECK(P.A().toDense() == ref.A);
    CHECK((P.b() - ref.b).norm() <= 1e-15);
    const Vec x = oracle::random_positive(P.num_variables(), rng, 0.0, 0.2);
    CHECK(P.objective(x) == doctest::Approx(ref.f(x)).epsilon(1e-13));
  }
}

TEST_CASE("lower problem: initial point is interior and feasible") {
  for (Index n : {1, 2, 6, 33}) {
    const LowerProblem P(n);
    const auto it = P.initial_point();
    CHECK(it.x.minCoeff() > 0);
    CHECK((spmv(P.A(), it.x) - P.b()).norm() <= 1e-14 * P.b().norm());
    CHECK(it.nu.isZero());
    CHECK(it.x.head(4 * n * n).isConstant(1.0 / (4.0 * n * n)));
  }
}

TEST_CASE("lower problem: gradient, Hessian and its inverse") {
  std::mt19937_64 rng(17);
  check_gradient_fd(LowerProblem(3), rng, 0.01, 0.5);
  check_gradient_fd(LowerProblem(6), rng, 0.001, 0.2);
  const LowerProblem P(3);
  check_hessian_inverse(P, oracle::random_positive(P.num_variables(), rng, 0.02, 0.5));
  CHECK_THROWS_AS(P.gradient(Vec::Zero(P.num_variables())), std::domain_error);
  CHECK_THROWS_AS(P.objective(-Vec::Ones(P.num_variables())), std::domain_error);
  CHECK_THROWS_AS(P.objective(Vec::Ones(3)), std::invalid_argument);
}

TEST_CASE("lower dual is a lower bound for every multiplier") {
  std::mt19937_64 rng(99);
  for (Index n : {2, 5, 9}) {
    const LowerProblem P(n);
    const double feasible_value = P.objective(P.initial_point().x);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec nu = oracle::random_positive(P.num_constraints(), rng, -3.0, 3.0);
      CHECK(P.dual(nu) <= feasible_value);
    }
    CHECK(P.dual(Vec::Constant(P.num_constraints(), -2000.0)) == -std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("lower dual equals h(-nu) computed densely") {
  std::mt19937_64 rng(4);
  const int n = 4;
  const LowerProblem P(n);
  const auto ref = oracle::dense_lower_program(n);
  const Vec nu = oracle::random_positive(P.num_constraints(), rng, -1.0, 1.0);
  const Vec y = -ref.A.transpose() * nu;
  const double h = -nu.dot(ref.b) - (y.array() - 1.0).exp().sum() + 4 * std::log(4.0) + 2 * std::log(2.0) + 3;
  CHECK(P.dual(nu) == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("upper problem: dimensions and structure") {
  for (Index n : {1, 2, 3, 5, 8}) {
    const UpperProblem P(n);
    CHECK(P.num_variables() == 4 * n * n + 8 * n - 4);
    CHECK(P.num_constraints() == 14 * n - 6);
    check_structure(P, 2 * n + 1, {1.0, 2.0 * n});
    Eigen::FullPivLU<Mat> lu(P.A().toDense());
    CHECK(lu.rank() == P.num_constraints());
  }
}

TEST_CASE("upper problem: slacks are interleaved in adjacent pairs") {
  const Index n = 4;
  const UpperProblem P(n);
  for (Index k = -n + 2; k <= n - 1; ++k) {
    CHECK(P.d_ne(k) == P.d_sw(k - 1) + 1);
    CHECK(P.a_nw(k) == P.a_se(k - 1) + 1);
  }
  CHECK(P.d_ne(-n + 1) == 4 * n * n);
  CHECK(P.a_se(n - 1) == P.num_variables() - 1);
  const auto H = P.hessian(Vec::Ones(P.num_variables()));
  CHECK(H.pairs().size() == static_cast<std::size_t>(2 * (2 * n - 2)));
}

TEST_CASE("upper problem agrees with the dense restatement") {
  std::mt19937_64 rng(8);
  for (int n : {1, 2, 3, 4, 6}) {
    const UpperProblem P(n);
    const auto ref = oracle::dense_upper_program(n);
    const auto map = upper_column_map(P);
    const Mat A = P.A().toDense();
    Mat permuted(A.rows(), A.cols());
    for (Index c = 0; c < A.cols(); ++c) permuted.col(c) = A.col(map[c]);
    CHECK(permuted == ref.A);
    CHECK(P.b() == ref.b);
    const Vec x = oracle::random_positive(P.num_variables(), rng, 0.05, 3.0);
    CHECK(P.objective(to_library_order(x, map)) == doctest::Approx(ref.f(x)).epsilon(1e-13));
  }
}

TEST_CASE("upper problem: gradient, Hessian and its inverse") {
  std::mt19937_64 rng(23);
  check_gradient_fd(UpperProblem(3), rng, 0.05, 3.0);
  check_gradient_fd(UpperProblem(5), rng, 0.5, 1.5);
  const UpperProblem P(3);
  Vec x = oracle::random_positive(P.num_variables(), rng, 0.2, 2.0);
  x[P.d_ne(0)] = x[P.d_sw(-1)] * 1.01;  // a pair on the series branch
  check_hessian_inverse(P, x);
}

TEST_CASE("approximate upper problem: structure, derivatives and the Jensen inequality") {
  std::mt19937_64 rng(31);
  for (Index n : {1, 2, 4, 7}) {
    const ApproxUpperProblem Q(n);
    CHECK(Q.num_variables() == 4 * n * n + 4 * n);
    CHECK(Q.num_constraints() == 10 * n - 2);
    check_structure(Q, 4 * n, {1.0, 4.0 * n});
    CHECK(Eigen::FullPivLU<Mat>(Q.A().toDense()).rank() == Q.num_constraints());
  }
  check_gradient_fd(ApproxUpperProblem(4), rng, 0.05, 3.0);
  const ApproxUpperProblem Q3(3);
  check_hessian_inverse(Q3, oracle::random_positive(Q3.num_variables(), rng, 0.2, 2.0));

  // Averaging the slacks of an exact feasible point gives an approximate
  // feasible point whose objective is no larger.
  for (Index n : {3, 5}) {
    const UpperProblem P(n);
    const ApproxUpperProblem Q(n);
    const auto ref = oracle::dense_upper_program(static_cast<int>(n));
    const auto map = upper_column_map(P);
    const Vec x = to_library_order(oracle::project(ref.A, ref.b, Vec::Ones(P.num_variables())), map);
    REQUIRE(x.minCoeff() > 0);
    Vec xa(Q.num_variables());
    xa.head(4 * n * n) = x.head(4 * n * n);
    for (Index k = -n + 1; k <= n; ++k) {
      const double sw = k == -n + 1 ? 1.0 : x[P.d_sw(k - 1)], ne = k == n ? 1.0 : x[P.d_ne(k)];
      const double se = k == -n + 1 ? 1.0 : x[P.a_se(k - 1)], nw = k == n ? 1.0 : x[P.a_nw(k)];
      xa[Q.d_avg(k)] = 0.5 * (sw + ne);
      xa[Q.a_avg(k)] = 0.5 * (se + nw);
    }
    CHECK((spmv(Q.A(), xa) - Q.b()).norm() <= 1e-12 * Q.b().norm());
    CHECK(Q.objective(xa) <= P.objective(x));
  }
}

TEST_CASE("lifted approximate solution is feasible with zero slack dual residual") {
  for (Index n : {3, 8}) {
    const UpperProblem P(n);
    const ApproxUpperProblem Q(n);
    const auto sol = solve(Q, Q.initial_point(), NewtonConfig{});
    const Iterate start = lift_approx_solution(P, Q, sol.iterate);
    CHECK(start.x.minCoeff() > 0);
    const Residual r = compute_residual(P, start.x, start.nu);
    CHECK(r.primal_norm() <= 1e-12 * P.b().norm());
    for (Index k = -n + 1; k <= n - 1; ++k) {
      CHECK(std::abs(r.dual[P.d_sw(k)]) <= 1e-12);
      CHECK(std::abs(r.dual[P.a_nw(k)]) <= 1e-12);
    }
    CHECK(r.norm < compute_residual(P, P.initial_point().x, P.initial_point().nu).norm);
  }
  const UpperProblem P(3);
  const ApproxUpperProblem Q(3);
  Iterate bad = Q.initial_point();
  bad.x.head(36).setConstant(10.0);  // slacks recomputed from these go negative
  CHECK_THROWS_AS(lift_approx_solution(P, Q, bad), std::domain_error);
}

TEST_CASE("reported sizes at the published resolutions") {
  const Index n = 1024;
  CHECK(4 * n * n + 8 * n - 4 == 4202492);
  const UpperProblem P(n);
  CHECK(P.num_variables() == 4202492);
  CHECK(P.num_constraints() == 14330);
}
