#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nqueens/minres.hpp"
#include "oracles.hpp"

using namespace nqueens;
using oracle::Mat;
using oracle::Vec;

namespace {

bool non_increasing(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1]) return false;
  return true;
}

}  // namespace

TEST_CASE("SPD systems match a dense solve") {
  std::mt19937_64 rng(42);
  for (Eigen::Index q : {1, 2, 7, 30, 64, 100})
    for (double cond : {1.0, 1e2, 1e4, 1e6}) {
      const Mat S = oracle::random_spd(q, cond, rng);
      const Vec rhs = oracle::random_positive(q, rng, -1.0, 1.0);
      const Vec ref = S.ldlt().solve(rhs);
      const auto res = minres<double>([&](const Vec& v) -> Vec { return S * v; }, rhs, 1e-14, 20 * q);
      INFO("q=" << q << " cond=" << cond << " iters=" << res.iterations);
      CHECK(res.converged);
      CHECK((res.solution - ref).norm() <= 1e-10 * ref.norm());
      CHECK(non_increasing(res.residual_history));
      CHECK(res.residual_history.size() == static_cast<std::size_t>(res.iterations));
      // the recurrence estimate tracks the true residual down to roughly eps * cond^2
      const double attainable = 10 * std::numeric_limits<double>::epsilon() * cond * cond;
      CHECK((S * res.solution - rhs).norm() <= (1e-14 + attainable) * rhs.norm());
    }
}

TEST_CASE("well-conditioned systems need at most q iterations") {
  std::mt19937_64 rng(1);
  const Mat S = oracle::random_spd(50, 10.0, rng);
  const Vec rhs = Vec::Ones(50);
  const auto res = minres<double>([&](const Vec& v) -> Vec { return S * v; }, rhs, 1e-12, 50);
  CHECK(res.converged);
  CHECK(res.iterations <= 50);
  CHECK(res.relative_residual <= 1e-12);
}

TEST_CASE("symmetric indefinite systems") {
  std::mt19937_64 rng(9);
  const Mat Q = oracle::random_spd(40, 1.0, rng);  // orthogonal up to scaling
  Vec spectrum = Vec::LinSpaced(40, -3.0, 5.0);
  spectrum[20] = 0.7;  // keep away from zero
  const Mat S = Q * spectrum.asDiagonal() * Q.transpose();
  const Vec rhs = oracle::random_positive(40, rng, -1, 1);
  const auto res = minres<double>([&](const Vec& v) -> Vec { return S * v; }, rhs, 1e-13, 400);
  CHECK(res.converged);
  CHECK((S * res.solution - rhs).norm() <= 1e-12 * rhs.norm());
  CHECK(non_increasing(res.residual_history));
}

TEST_CASE("Jacobi preconditioning") {
  std::mt19937_64 rng(5);
  Mat S = oracle::random_spd(60, 1e3, rng);
  const Vec scale = oracle::random_positive(60, rng, 1e-2, 1e2);
  S = scale.asDiagonal() * S * scale.asDiagonal();
  const Vec rhs = oracle::random_positive(60, rng, -1, 1);
  const Vec inv_diag = S.diagonal().cwiseInverse();
  const auto res = minres<double>([&](const Vec& v) -> Vec { return S * v; }, rhs, 1e-14, 2000,
                                  [&](const Vec& v) -> Vec { return inv_diag.cwiseProduct(v); });
  const Vec ref = S.ldlt().solve(rhs);
  CHECK(res.converged);
  CHECK((res.solution - ref).norm() <= 1e-8 * ref.norm());
  CHECK(non_increasing(res.residual_history));
}

TEST_CASE("edge cases") {
  const Mat S = Mat::Identity(5, 5) * 2.0;
  const auto op = [&](const Vec& v) -> Vec { return S * v; };
  const auto zero = minres<double>(op, Vec::Zero(5), 1e-12, 5);
  CHECK(zero.converged);
  CHECK(zero.iterations == 0);
  CHECK(zero.solution.isZero());

  const auto exact = minres<double>(op, Vec::Ones(5), 1e-12, 5);
  CHECK(exact.iterations == 1);
  CHECK(exact.solution.isApprox(Vec::Constant(5, 0.5)));

  Vec bad = Vec::Ones(5);
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(minres<double>(op, bad, 1e-12, 5), MinresBreakdown);
}

TEST_CASE("iteration cap returns the best iterate without throwing") {
  std::mt19937_64 rng(3);
  const Mat S = oracle::random_spd(80, 1e6, rng);
  const Vec rhs = oracle::random_positive(80, rng, -1, 1);
  const auto res = minres<double>([&](const Vec& v) -> Vec { return S * v; }, rhs, 1e-14, 5);
  CHECK(!res.converged);
  CHECK(res.iterations == 5);
  CHECK(res.solution.allFinite());
  CHECK(res.relative_residual < 1.0);
  CHECK((S * res.solution - rhs).norm() / rhs.norm() == doctest::Approx(res.relative_residual).epsilon(1e-6));
}
