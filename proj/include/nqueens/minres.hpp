#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nqueens {

/// Raised when MINRES meets non-finite values (operator breakdown).
class MinresBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
struct MinresResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solution;
  Scalar relative_residual = Scalar(0);  // recurrence estimate of ||b - S x|| / ||b||
  Eigen::Index iterations = 0;
  bool converged = false;
  std::vector<Scalar> residual_history;  // relative residual after each iteration
};

struct IdentityPreconditioner {
  template <typename Vec>
  const Vec& operator()(const Vec& v) const {
    return v;
  }
};

/// Solves S x = rhs for a symmetric operator given only y -> S y
/// (Paige-Saunders MINRES, no restarts or reorthogonalisation).
///
/// `precond` applies an SPD approximation of S^{-1}; the stopping test is then
/// on the preconditioned residual. Hitting `max_iters` is not an error: the
/// best iterate is returned with `converged = false`.
template <typename Scalar, typename Operator, typename Preconditioner = IdentityPreconditioner>
MinresResult<Scalar> minres(Operator&& op, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs,
                            Scalar rel_tol, Eigen::Index max_iters,
                            Preconditioner&& precond = Preconditioner{}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using std::sqrt;
  const Eigen::Index dim = rhs.size();
  MinresResult<Scalar> result;
  result.solution = Vec::Zero(dim);
  if (!rhs.allFinite()) throw MinresBreakdown("minres: right-hand side is not finite");

  Vec r1 = rhs;
  Vec y = precond(r1);
  Scalar beta1 = r1.dot(y);
  if (beta1 < Scalar(0)) throw MinresBreakdown("minres: preconditioner is not positive definite");
  beta1 = sqrt(beta1);
  if (beta1 == Scalar(0)) {
    result.converged = true;
    return result;
  }

  Vec r2 = r1;
  Vec v(dim), w = Vec::Zero(dim), w1(dim), w2 = Vec::Zero(dim);
  Scalar oldb(0), beta = beta1, dbar(0), epsln(0), phibar = beta1;
  Scalar cs(-1), sn(0);
  const Scalar tiny = std::numeric_limits<Scalar>::epsilon();

  for (Eigen::Index itn = 1; itn <= max_iters; ++itn) {
    v = y / beta;
    y = op(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const Scalar alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    y = precond(r2);
    oldb = beta;
    beta = r2.dot(y);
    if (!(beta >= Scalar(0)) || !std::isfinite(alfa))
      throw MinresBreakdown("minres: non-finite or indefinite Lanczos step");
    beta = sqrt(beta);

    const Scalar oldeps = epsln;
    const Scalar delta = cs * dbar + sn * alfa;
    const Scalar gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    Scalar gamma = sqrt(gbar * gbar + beta * beta);
    gamma = std::max(gamma, tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const Scalar phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    result.solution += phi * w;

    result.iterations = itn;
    result.relative_residual = phibar / beta1;
    result.residual_history.push_back(result.relative_residual);
    if (!std::isfinite(result.relative_residual))
      throw MinresBreakdown("minres: residual estimate is not finite");
    if (result.relative_residual <= rel_tol || beta == Scalar(0)) {
      result.converged = true;
      if (beta == Scalar(0)) result.relative_residual = Scalar(0);
      break;
    }
  }
  return result;
}

}  // namespace nqueens
