#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "nqueens/lower_problem.hpp"
#include "nqueens/problem.hpp"
#include "nqueens/upper_problem.hpp"

namespace nqueens {

enum class BoundKind { Lower, Upper };

std::string to_string(BoundKind kind);

/// A bound on the n-queens constant together with the evidence behind it.
///
/// Lower: certified_value is the dual value h(nu), valid for any nu.
/// Upper: certified_value is the objective at a point projected onto Ax = b
/// (to floating-point accuracy) and checked to be strictly positive.
struct BoundCertificate {
  Index n = 0;
  BoundKind kind = BoundKind::Lower;
  double certified_value = 0.0;
  double primal_objective = 0.0;
  std::optional<double> dual_value;  // lower only
  double primal_residual_norm = 0.0;
  int newton_iterations = 0;
  double wall_time_seconds = 0.0;
};

struct SolveSummary {
  int newton_iterations = 0;
  double wall_time_seconds = 0.0;
};

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lower-bound certificate from a dual vector. `x` only feeds the reported
/// primal objective and residual.
BoundCertificate certify_lower(const LowerProblem& problem, const Vector& x, const Vector& nu,
                               SolveSummary summary = {});

struct ProjectionOptions {
  double feasibility_tol = 1e-10;  // required ||A x - b||_2 after projection
  double minres_rel_tol = 1e-14;
  int max_refinements = 4;
};

/// Least-norm correction x + A^T lambda with (A A^T) lambda = b - A x, repeated
/// (iterative refinement) until ||A x - b|| <= feasibility_tol. Throws
/// CertificationError if the result has a non-positive component or the
/// tolerance cannot be reached.
Vector project_feasible(const Problem& problem, const Vector& x, const ProjectionOptions& opts = {});

/// Upper-bound certificate: projects x, re-checks positivity and evaluates the
/// objective there.
BoundCertificate certify_upper(const UpperProblem& problem, const Vector& x,
                               SolveSummary summary = {}, const ProjectionOptions& opts = {});

/// Outward rounding to `digits` decimals: lower bounds are rounded down,
/// upper bounds up. The result is the double nearest that decimal.
double round_outward(double value, BoundKind kind, int digits = 9);

/// Certificate as a JSON object with a fixed field order; reals use 17
/// significant digits, dual_value is null for upper bounds.
std::string to_json(const BoundCertificate& cert);

/// One-line human-readable summary with the outward-rounded value.
std::string to_text(const BoundCertificate& cert);

}  // namespace nqueens
