#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace nqueens {

// Negative entropy g(x) = x log x, extended by g(0) = 0.

template <typename Scalar>
Scalar neg_entropy(Scalar x) {
  using std::log;
  if (x < Scalar(0) || std::isnan(x)) throw std::domain_error("neg_entropy: argument must be >= 0");
  return x == Scalar(0) ? Scalar(0) : x * log(x);
}

template <typename Scalar>
Scalar neg_entropy_d1(Scalar x) {
  using std::log;
  if (!(x > Scalar(0))) throw std::domain_error("neg_entropy_d1: argument must be > 0");
  return log(x) + Scalar(1);
}

template <typename Scalar>
Scalar neg_entropy_d2(Scalar x) {
  if (!(x > Scalar(0))) throw std::domain_error("neg_entropy_d2: argument must be > 0");
  return Scalar(1) / x;
}

/// Convex conjugate of the negative entropy: sup_x (x y - x log x) = exp(y - 1).
template <typename Scalar>
Scalar neg_entropy_conj(Scalar y) {
  using std::exp;
  return exp(y - Scalar(1));
}

/// 2x2 Hessian block of a pair term.
template <typename Scalar>
struct PairHessian {
  Scalar uu;
  Scalar uv;
  Scalar vv;

  Scalar determinant() const { return uu * vv - uv * uv; }
  Eigen::Matrix<Scalar, 2, 2> matrix() const {
    Eigen::Matrix<Scalar, 2, 2> m;
    m << uu, uv, uv, vv;
    return m;
  }
};

/// Relative gap |u - v| <= kPairSeriesGap * max(u, v) below which the pair
/// integral and its derivatives are evaluated from their power series in the
/// half-difference instead of the closed forms.
inline constexpr double kPairSeriesGap = 0.05;

namespace detail {

// With m = (u + v)/2 and r = (v - u)/(u + v), the pair integral
//   F(u, v) = int_0^1 g((1 - y) u + y v) dy
// and its derivatives reduce to one-dimensional moments over z in [-1, 1]:
//   I  = int (1 + rz) log(1 + rz)      J0 = int log(1 + rz)
//   J1 = int z log(1 + rz)             Kp = int z^p / (1 + rz),  p = 0, 1, 2
template <typename Scalar>
struct PairMoments {
  Scalar I, J0, J1, K0, K1, K2;
};

template <typename Scalar>
PairMoments<Scalar> pair_moments_series(Scalar r) {
  const Scalar r2 = r * r;
  PairMoments<Scalar> mo{Scalar(0), Scalar(0), Scalar(0), Scalar(0), Scalar(0), Scalar(0)};
  // Sum from the smallest term up.
  constexpr int kTerms = 10;
  Scalar pow_even[kTerms];
  pow_even[0] = Scalar(1);
  for (int j = 1; j < kTerms; ++j) pow_even[j] = pow_even[j - 1] * r2;
  for (int j = kTerms - 1; j >= 0; --j) {
    const Scalar a = Scalar(2 * j + 1), b = Scalar(2 * j + 3);
    if (j >= 1) {
      mo.I += Scalar(2) * pow_even[j] / (a * Scalar(2 * j) * Scalar(2 * j - 1));
      mo.J0 -= pow_even[j] / (Scalar(j) * a);
    }
    mo.J1 += Scalar(2) * pow_even[j] / (a * b);
    mo.K0 += Scalar(2) * pow_even[j] / a;
    mo.K1 -= Scalar(2) * pow_even[j] / b;
    mo.K2 += Scalar(2) * pow_even[j] / b;
  }
  mo.J1 *= r;
  mo.K1 *= r;
  return mo;
}

// Closed forms; lu = log(1 - r) = log(u/m), lv = log(1 + r) = log(v/m).
template <typename Scalar>
PairMoments<Scalar> pair_moments_closed(Scalar r, Scalar lu, Scalar lv, Scalar one_minus_r2) {
  const Scalar atanh_over_r = (lv - lu) / (Scalar(2) * r);
  PairMoments<Scalar> mo;
  mo.I = (Scalar(1) + r * r) * atanh_over_r + lu + lv - Scalar(1);
  mo.J0 = Scalar(2) * atanh_over_r + lu + lv - Scalar(2);
  mo.J1 = (Scalar(1) - one_minus_r2 * atanh_over_r) / r;
  mo.K0 = Scalar(2) * atanh_over_r;
  mo.K1 = (Scalar(2) - mo.K0) / r;
  mo.K2 = (mo.K0 - Scalar(2)) / (r * r);
  return mo;
}

template <typename Scalar>
bool pair_use_series(Scalar u, Scalar v) {
  using std::abs;
  using std::max;
  return abs(u - v) <= Scalar(kPairSeriesGap) * max(u, v);
}

template <typename Scalar>
PairMoments<Scalar> pair_moments(Scalar u, Scalar v, Scalar m) {
  using std::log;
  const Scalar r = (v - u) / (u + v);
  if (pair_use_series(u, v)) return pair_moments_series(r);
  return pair_moments_closed(r, log(u / m), log(v / m), (u / m) * (v / m));
}

// G(t) = t^2 log t / 2 - t^2 / 4 is an antiderivative of g; G(0) = 0.
template <typename Scalar>
Scalar neg_entropy_antiderivative(Scalar t) {
  using std::log;
  return t == Scalar(0) ? Scalar(0) : t * t * log(t) / Scalar(2) - t * t / Scalar(4);
}

template <typename Scalar>
void check_pair_args(Scalar u, Scalar v, bool strict, const char* what) {
  const bool ok = strict ? (u > Scalar(0) && v > Scalar(0)) : (u >= Scalar(0) && v >= Scalar(0));
  if (!ok) throw std::domain_error(what);
}

}  // namespace detail

/// F(u, v) = int_0^1 g((1 - y) u + y v) dy for u, v >= 0.
template <typename Scalar>
Scalar pair_integral(Scalar u, Scalar v) {
  using std::log;
  detail::check_pair_args(u, v, false, "pair_integral: arguments must be >= 0");
  if (u == v) return neg_entropy(u);
  if (u == Scalar(0) || v == Scalar(0))
    return (detail::neg_entropy_antiderivative(v) - detail::neg_entropy_antiderivative(u)) / (v - u);
  const Scalar m = (u + v) / Scalar(2);
  const auto mo = detail::pair_moments(u, v, m);
  return m * log(m) + m / Scalar(2) * mo.I;
}

/// (dF/du, dF/dv) for u, v > 0.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> pair_integral_grad(Scalar u, Scalar v) {
  using std::log;
  detail::check_pair_args(u, v, true, "pair_integral_grad: arguments must be > 0");
  const Scalar m = (u + v) / Scalar(2);
  const auto mo = detail::pair_moments(u, v, m);
  const Scalar base = (log(m) + Scalar(1)) / Scalar(2);
  return {base + (mo.J0 - mo.J1) / Scalar(4), base + (mo.J0 + mo.J1) / Scalar(4)};
}

/// Second derivatives; equals int_0^1 [(1-y)^2, (1-y)y; (1-y)y, y^2] / ((1-y)u + yv) dy.
template <typename Scalar>
PairHessian<Scalar> pair_integral_hess(Scalar u, Scalar v) {
  detail::check_pair_args(u, v, true, "pair_integral_hess: arguments must be > 0");
  const Scalar m = (u + v) / Scalar(2);
  const auto mo = detail::pair_moments(u, v, m);
  const Scalar scale = Scalar(1) / (Scalar(8) * m);
  return {scale * (mo.K0 - Scalar(2) * mo.K1 + mo.K2), scale * (mo.K0 - mo.K2),
          scale * (mo.K0 + Scalar(2) * mo.K1 + mo.K2)};
}

}  // namespace nqueens
