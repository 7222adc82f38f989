#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nqueens/certify.hpp"
#include "nqueens/newton.hpp"

namespace nqueens {

enum class OutputFormat { Json, Text };

struct RunConfig {
  Index n = 0;
  BoundKind bound = BoundKind::Lower;
  NewtonConfig newton;
  bool warm_start = true;  // upper only: solve the Jensen approximation first
  OutputFormat output = OutputFormat::Json;
  std::string trace_path;        // line-delimited JSON, one record per Newton iteration
  std::string dump_matrix_path;  // prefix for Matrix Market dumps of A and b
  int threads = 1;
};

enum ExitCode : int { kCertified = 0, kUsage = 1, kNonConvergence = 2, kCertificationFailure = 3 };

struct RunOutcome {
  int exit_code = kCertified;
  std::optional<BoundCertificate> certificate;
  std::vector<SolveTrace> traces;  // one per phase, in order
  int approx_iterations = 0;       // warm-start phase (upper only)
  int exact_iterations = 0;
  bool warm_started = false;
  std::string error;
};

/// Builds, solves and certifies one bound. Progress goes to `log`. Throws
/// std::invalid_argument for an invalid configuration; solver and
/// certification failures are reported through the exit code.
RunOutcome run(const RunConfig& config, std::ostream& log);

}  // namespace nqueens
