#include "nqueens/newton.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "nqueens/minres.hpp"

namespace nqueens {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

void NewtonConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(t_max_fraction > 0.0 && t_max_fraction < 1.0))
    throw std::invalid_argument("t_max_fraction must lie in (0, 1)");
  if (!(minres_rel_tol > 0.0)) throw std::invalid_argument("minres_rel_tol must be positive");
  if (minres_max_iters < 0) throw std::invalid_argument("minres_max_iters must be non-negative");
  if (max_backtracks < 0) throw std::invalid_argument("max_backtracks must be non-negative");
}

Residual compute_residual(const Problem& problem, const Vector& x, const Vector& nu) {
  if (nu.size() != problem.num_constraints())
    throw std::invalid_argument("compute_residual: dual dimension mismatch");
  Residual r;
  r.dual = problem.gradient(x);
  r.dual += spmv_t(problem.A(), nu);
  r.primal = spmv(problem.A(), x) - problem.b();
  r.norm = std::sqrt(r.dual.squaredNorm() + r.primal.squaredNorm());
  return r;
}

Vector SchurOperator::diagonal() const {
  const auto& A = *A_;
  Vector diag = Vector::Zero(A.rows());
  const auto& outer = A.outerIndex();
  const auto& inner = A.innerIndex();
  const auto& values = A.values();
  const Vector& h = hess_inv_.diagonal();
  for (Index c = 0; c < A.cols(); ++c)
    for (auto k = outer[c]; k < outer[c + 1]; ++k) diag[inner[k]] += values[k] * values[k] * h[c];
  for (const auto& p : hess_inv_.pairs()) {
    for (auto k = outer[p.first]; k < outer[p.first + 1]; ++k)
      diag[inner[k]] += values[k] * values[k] * p.a;
    for (auto k = outer[p.first + 1]; k < outer[p.first + 2]; ++k)
      diag[inner[k]] += values[k] * values[k] * p.c;
  }
  return diag;
}

NewtonStep newton_step(const Problem& problem, const Vector& x, const Residual& residual,
                       const NewtonConfig& cfg) {
  const SchurOperator schur(problem.A(), problem.hessian(x).inverse());
  const auto& hinv = schur.hess_inv();
  const Vector hinv_rd = hinv.apply(residual.dual);
  const Vector rhs = residual.primal - spmv(problem.A(), hinv_rd);
  // Exact arithmetic would finish within q steps; in floating point tiny
  // systems can need a few more.
  const Index cap = cfg.minres_max_iters > 0 ? cfg.minres_max_iters : 4 * problem.num_constraints();

  MinresResult<double> sol;
  if (cfg.jacobi_preconditioner) {
    const Vector inv_diag = schur.diagonal().cwiseInverse();
    sol = minres<double>(schur, rhs, cfg.minres_rel_tol, cap,
                         [&inv_diag](const Vector& v) -> Vector { return inv_diag.cwiseProduct(v); });
  } else {
    sol = minres<double>(schur, rhs, cfg.minres_rel_tol, cap);
  }

  NewtonStep step;
  step.dnu = std::move(sol.solution);
  step.dx = -hinv.apply(residual.dual + spmv_t(problem.A(), step.dnu));
  step.krylov = {sol.iterations, sol.relative_residual, sol.converged};
  if (!sol.converged)
    throw NewtonStepError("MINRES reached " + std::to_string(sol.iterations) +
                              " iterations with relative residual " +
                              sci(sol.relative_residual),
                          std::move(step));
  return step;
}

NewtonStep newton_step(const Problem& problem, const Vector& x, const Vector& nu,
                       const NewtonConfig& cfg) {
  return newton_step(problem, x, compute_residual(problem, x, nu), cfg);
}

double max_step_to_boundary(const Vector& x, const Vector& dx) {
  if (x.size() != dx.size()) throw std::invalid_argument("max_step_to_boundary: dimension mismatch");
  double t_max = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) t_max = std::min(t_max, x[i] / -dx[i]);
  return t_max;
}

LineSearchResult line_search(const Problem& problem, const Vector& x, const Vector& nu,
                             const NewtonStep& step, const Residual& residual,
                             const NewtonConfig& cfg) {
  LineSearchResult result;
  result.t_cap = std::min(cfg.t_max_fraction * max_step_to_boundary(x, step.dx), 1.0);
  double t = result.t_cap;
  for (int ell = 0; ell <= cfg.max_backtracks; ++ell, t *= cfg.beta) {
    Vector x_trial = x + t * step.dx;
    if (!(x_trial.array() > 0.0).all()) continue;  // rounding at the domain cap
    Residual trial = compute_residual(problem, x_trial, nu + t * step.dnu);
    if (trial.norm <= (1.0 - cfg.alpha * t) * residual.norm) {
      result.t = t;
      result.backtracks = ell;
      result.residual = std::move(trial);
      return result;
    }
  }
  throw LineSearchFailure("line search: no sufficient decrease after " +
                          std::to_string(cfg.max_backtracks) + " backtracks");
}

void write_trace_jsonl(std::ostream& os, const SolveTrace& trace) {
  for (const auto& rec : trace.records) {
    nlohmann::ordered_json j;
    j["k"] = rec.k;
    j["r_norm"] = rec.r_norm;
    j["t"] = rec.t;
    j["ell"] = rec.ell;
    j["minres_iters"] = rec.minres_iters;
    j["minres_relres"] = rec.minres_relres;
    j["wall_ms"] = rec.wall_ms;
    j["rp_norm"] = rec.rp_norm;
    j["rp_affine_error"] = rec.rp_affine_error;
    j["x_min"] = rec.x_min;
    if (!trace.label.empty()) j["phase"] = trace.label;
    os << j.dump() << '\n';
  }
}

SolveResult solve(const Problem& problem, Iterate init, const NewtonConfig& cfg,
                  const IterationCallback& on_iteration, std::string label) {
  using Clock = std::chrono::steady_clock;
  cfg.validate();
  const auto start = Clock::now();
  if (init.x.size() != problem.num_variables() || init.nu.size() != problem.num_constraints())
    throw std::invalid_argument("solve: initial point has the wrong dimensions");
  if (!(init.x.array() > 0.0).all())
    throw std::domain_error("solve: initial x must be strictly positive");

  SolveResult out;
  out.trace.label = std::move(label);
  out.iterate = std::move(init);
  out.residual = compute_residual(problem, out.iterate.x, out.iterate.nu);
  out.trace.initial_r_norm = out.residual.norm;
  out.trace.initial_rp_norm = out.residual.primal_norm();

  auto fail = [&](SolverError::Kind kind, const std::string& what) {
    throw SolverError(kind, what, out.trace, out.iterate);
  };

  while (!(out.residual.norm < cfg.eps)) {
    if (out.iterate.k >= cfg.max_iters)
      fail(SolverError::Kind::MaxIterations,
           "Newton method did not converge in " + std::to_string(cfg.max_iters) +
               " iterations (residual " + sci(out.residual.norm) + ")");
    const auto iter_start = Clock::now();
    NewtonStep step;
    try {
      step = newton_step(problem, out.iterate.x, out.residual, cfg);
    } catch (const NewtonStepError& e) {
      fail(SolverError::Kind::StepFailed, e.what());
    }
    LineSearchResult ls;
    try {
      ls = line_search(problem, out.iterate.x, out.iterate.nu, step, out.residual, cfg);
    } catch (const LineSearchFailure& e) {
      fail(SolverError::Kind::LineSearchFailed, e.what());
    }

    TraceRecord rec;
    rec.rp_affine_error = (ls.residual.primal - (1.0 - ls.t) * out.residual.primal).norm();
    out.iterate.x += ls.t * step.dx;
    out.iterate.nu += ls.t * step.dnu;
    ++out.iterate.k;
    out.residual = std::move(ls.residual);

    rec.k = out.iterate.k;
    rec.r_norm = out.residual.norm;
    rec.t = ls.t;
    rec.ell = ls.backtracks;
    rec.minres_iters = step.krylov.iterations;
    rec.minres_relres = step.krylov.relative_residual;
    rec.rp_norm = out.residual.primal_norm();
    rec.x_min = out.iterate.x.minCoeff();
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - iter_start).count();
    out.trace.records.push_back(rec);
    if (on_iteration) on_iteration(rec);
  }
  out.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace nqueens
