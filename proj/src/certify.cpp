#include "nqueens/certify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "nqueens/minres.hpp"

namespace nqueens {

namespace {

std::string format_real(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(BoundKind kind) { return kind == BoundKind::Lower ? "lower" : "upper"; }

BoundCertificate certify_lower(const LowerProblem& problem, const Vector& x, const Vector& nu,
                               SolveSummary summary) {
  BoundCertificate cert;
  cert.n = problem.board_size();
  cert.kind = BoundKind::Lower;
  cert.dual_value = problem.dual(nu);
  cert.certified_value = *cert.dual_value;
  cert.primal_objective = problem.objective(x);
  cert.primal_residual_norm = (spmv(problem.A(), x) - problem.b()).norm();
  cert.newton_iterations = summary.newton_iterations;
  cert.wall_time_seconds = summary.wall_time_seconds;
  return cert;
}

Vector project_feasible(const Problem& problem, const Vector& x, const ProjectionOptions& opts) {
  const auto& A = problem.A();
  const Vector ones = Vector::Ones(A.cols());
  const auto gram = [&](const Vector& y) -> Vector { return weighted_gram_apply(A, ones, y); };
  Vector out = x;
  Vector residual = problem.b() - spmv(A, out);
  for (int pass = 0; pass <= opts.max_refinements && residual.norm() > opts.feasibility_tol; ++pass) {
    const auto sol = minres<double>(gram, residual, opts.minres_rel_tol, 4 * A.rows());
    out += spmv_t(A, sol.solution);
    residual = problem.b() - spmv(A, out);
  }
  if (residual.norm() > opts.feasibility_tol)
    throw CertificationError("projection reached ||Ax - b|| = " + format_real(residual.norm()) +
                             ", above the tolerance " + format_real(opts.feasibility_tol));
  if (!(out.array() > 0.0).all())
    throw CertificationError("projected point has a non-positive component");
  return out;
}

BoundCertificate certify_upper(const UpperProblem& problem, const Vector& x, SolveSummary summary,
                               const ProjectionOptions& opts) {
  if (!(x.array() > 0.0).all()) throw CertificationError("certify_upper: x must be strictly positive");
  const Vector feasible = project_feasible(problem, x, opts);
  BoundCertificate cert;
  cert.n = problem.board_size();
  cert.kind = BoundKind::Upper;
  cert.primal_objective = problem.objective(feasible);
  cert.certified_value = cert.primal_objective;
  cert.primal_residual_norm = (spmv(problem.A(), feasible) - problem.b()).norm();
  cert.newton_iterations = summary.newton_iterations;
  cert.wall_time_seconds = summary.wall_time_seconds;
  return cert;
}

double round_outward(double value, BoundKind kind, int digits) {
  if (digits < 0 || digits > 15) throw std::invalid_argument("round_outward: digits must lie in [0, 15]");
  const double scale = std::pow(10.0, digits);  // exact for digits <= 22
  const double scaled = value * scale;
  // k / 10^d is the double nearest the decimal k * 10^-d
  return (kind == BoundKind::Lower ? std::floor(scaled) : std::ceil(scaled)) / scale;
}

std::string to_json(const BoundCertificate& cert) {
  std::ostringstream os;
  os << "{\"n\": " << cert.n << ", \"kind\": \"" << to_string(cert.kind) << "\""
     << ", \"certified_value\": " << format_real(cert.certified_value)
     << ", \"primal_objective\": " << format_real(cert.primal_objective)
     << ", \"dual_value\": " << (cert.dual_value ? format_real(*cert.dual_value) : "null")
     << ", \"primal_residual_norm\": " << format_real(cert.primal_residual_norm)
     << ", \"newton_iterations\": " << cert.newton_iterations
     << ", \"wall_time_seconds\": " << format_real(cert.wall_time_seconds) << "}";
  return os.str();
}

std::string to_text(const BoundCertificate& cert) {
  char buf[256];
  const double rounded = round_outward(cert.certified_value, cert.kind);
  std::snprintf(buf, sizeof buf,
                "%s bound n=%lld: %.9f (value %.17g, primal %.17g, ||Ax-b|| %.3g, %d Newton "
                "iterations, %.2f s)",
                to_string(cert.kind).c_str(), static_cast<long long>(cert.n), rounded,
                cert.certified_value, cert.primal_objective, cert.primal_residual_norm,
                cert.newton_iterations, cert.wall_time_seconds);
  return buf;
}

}  // namespace nqueens
