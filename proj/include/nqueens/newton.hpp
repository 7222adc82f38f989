#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nqueens/problem.hpp"

namespace nqueens {

struct NewtonConfig {
  double alpha = 0.01;          // sufficient-decrease parameter, in (0, 1/2)
  double beta = 0.9;            // backtracking factor, in (0, 1)
  double eps = 1e-9;            // stop when ||r|| < eps
  int max_iters = 200;
  double t_max_fraction = 0.95;  // fraction of the step to the boundary of x > 0
  double minres_rel_tol = 1e-12;
  Index minres_max_iters = 0;   // 0: four times the number of constraints
  int max_backtracks = 200;
  bool jacobi_preconditioner = false;

  /// Throws std::invalid_argument for out-of-range parameters.
  void validate() const;
};

/// r_d = grad f(x) + A^T nu, r_p = A x - b, norm = ||(r_d, r_p)||_2.
struct Residual {
  Vector dual;
  Vector primal;
  double norm = 0.0;

  double dual_norm() const { return dual.norm(); }
  double primal_norm() const { return primal.norm(); }
};

Residual compute_residual(const Problem& problem, const Vector& x, const Vector& nu);

struct KrylovStats {
  Index iterations = 0;
  double relative_residual = 0.0;
  bool converged = true;
};

struct NewtonStep {
  Vector dx;
  Vector dnu;
  KrylovStats krylov;
};

/// Raised when MINRES misses its tolerance; carries the best step found.
class NewtonStepError : public std::runtime_error {
 public:
  NewtonStepError(const std::string& what, NewtonStep best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const NewtonStep& best() const { return best_; }

 private:
  NewtonStep best_;
};

/// The Schur complement A H^{-1} A^T at a point, applied matrix-free.
class SchurOperator {
 public:
  SchurOperator(const ConstraintMatrix& A, BlockDiagonal<double> hess_inv)
      : A_(&A), hess_inv_(std::move(hess_inv)) {}

  Vector operator()(const Vector& y) const { return sandwich_apply(*A_, hess_inv_, y); }
  Index size() const { return A_->rows(); }
  const BlockDiagonal<double>& hess_inv() const { return hess_inv_; }
  /// diag(A H^{-1} A^T) using only the 1x1 part of H^{-1}, plus the diagonal
  /// entries of the 2x2 blocks.
  Vector diagonal() const;

 private:
  const ConstraintMatrix* A_;
  BlockDiagonal<double> hess_inv_;
};

/// Solves the KKT system for (dx, dnu) by eliminating dx:
///   (A H^{-1} A^T) dnu = r_p - A H^{-1} r_d,   dx = -H^{-1} (r_d + A^T dnu).
/// Throws NewtonStepError when MINRES does not reach minres_rel_tol.
NewtonStep newton_step(const Problem& problem, const Vector& x, const Residual& residual,
                       const NewtonConfig& cfg);
NewtonStep newton_step(const Problem& problem, const Vector& x, const Vector& nu,
                       const NewtonConfig& cfg);

/// Largest t with x + t dx >= 0; +infinity when dx >= 0.
double max_step_to_boundary(const Vector& x, const Vector& dx);

class LineSearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineSearchResult {
  double t = 0.0;
  int backtracks = 0;   // the exponent l in t = beta^l * t_cap
  double t_cap = 1.0;   // min(t_max_fraction * t_max, 1)
  Residual residual;    // residual at the accepted point
};

/// Backtracking on the residual norm, starting from t_cap and accepting the
/// first t = beta^l t_cap (l >= 0) with ||r(x + t dx, nu + t dnu)|| <= (1 - alpha t) ||r||.
LineSearchResult line_search(const Problem& problem, const Vector& x, const Vector& nu,
                             const NewtonStep& step, const Residual& residual,
                             const NewtonConfig& cfg);

struct TraceRecord {
  int k = 0;
  double r_norm = 0.0;       // after the step
  double t = 0.0;
  int ell = 0;
  Index minres_iters = 0;
  double minres_relres = 0.0;
  double wall_ms = 0.0;      // time spent on this iteration
  double rp_norm = 0.0;      // primal residual after the step
  double rp_affine_error = 0.0;  // ||r_p(new) - (1 - t) r_p(old)||
  double x_min = 0.0;
};

struct SolveTrace {
  std::string label;
  double initial_r_norm = 0.0;
  double initial_rp_norm = 0.0;
  std::vector<TraceRecord> records;
};

/// One JSON object per iteration: k, r_norm, t, ell, minres_iters,
/// minres_relres, wall_ms, then rp_norm, rp_affine_error, x_min and the
/// trace label as "phase".
void write_trace_jsonl(std::ostream& os, const SolveTrace& trace);

struct SolveResult {
  Iterate iterate;
  Residual residual;
  SolveTrace trace;
  double wall_seconds = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { StepFailed, LineSearchFailed, MaxIterations };
  SolverError(Kind kind, const std::string& what, SolveTrace trace, Iterate last)
      : std::runtime_error(what), kind_(kind), trace_(std::move(trace)), last_(std::move(last)) {}
  Kind kind() const { return kind_; }
  const SolveTrace& trace() const { return trace_; }
  const Iterate& last_iterate() const { return last_; }

 private:
  Kind kind_;
  SolveTrace trace_;
  Iterate last_;
};

using IterationCallback = std::function<void(const TraceRecord&)>;

/// Infeasible-start Newton method. Iterates until ||r|| < eps, throwing
/// SolverError (with the trace so far) on step, line-search or iteration-cap
/// failure.
SolveResult solve(const Problem& problem, Iterate init, const NewtonConfig& cfg,
                  const IterationCallback& on_iteration = {}, std::string label = {});

}  // namespace nqueens
