#include "nqueens/driver.hpp"

#include <fstream>
#include <ostream>

#include "nqueens/parallel.hpp"

namespace nqueens {

namespace {

void dump_problem(const Problem& problem, const std::string& prefix, std::ostream& log) {
  const std::string tag = prefix + "_" + to_string(problem.kind()) + "_n" +
                          std::to_string(problem.board_size());
  std::ofstream A_file(tag + "_A.mtx"), b_file(tag + "_b.mtx");
  if (!A_file || !b_file) throw std::runtime_error("cannot write matrix dump with prefix " + prefix);
  write_matrix_market(A_file, problem.A());
  write_matrix_market_vector(b_file, problem.b());
  log << "wrote " << tag << "_A.mtx and " << tag << "_b.mtx\n";
}

IterationCallback progress(std::ostream& log, const std::string& phase) {
  return [&log, phase](const TraceRecord& rec) {
    log << phase << " k=" << rec.k << " |r|=" << rec.r_norm << " t=" << rec.t << " minres=" << rec.minres_iters
        << " (" << rec.wall_ms / 1000.0 << " s)\n";
    log.flush();
  };
}

SolveResult solve_phase(const Problem& problem, Iterate init, const RunConfig& config,
                        std::ostream& log, const std::string& phase, RunOutcome& outcome) {
  log << phase << ": n=" << problem.board_size() << " p=" << problem.num_variables()
      << " q=" << problem.num_constraints() << "\n";
  try {
    auto result = solve(problem, std::move(init), config.newton, progress(log, phase), phase);
    outcome.traces.push_back(result.trace);
    return result;
  } catch (const SolverError& e) {
    outcome.traces.push_back(e.trace());
    throw;
  }
}

}  // namespace

RunOutcome run(const RunConfig& config, std::ostream& log) {
  if (config.n < 1) throw std::invalid_argument("board size n must be >= 1");
  if (config.threads < 1) throw std::invalid_argument("thread count must be >= 1");
  config.newton.validate();
  set_thread_count(config.threads);

  RunOutcome outcome;
  try {
    if (config.bound == BoundKind::Lower) {
      const LowerProblem problem(config.n);
      if (!config.dump_matrix_path.empty()) dump_problem(problem, config.dump_matrix_path, log);
      auto result = solve_phase(problem, problem.initial_point(), config, log, "lower", outcome);
      outcome.exact_iterations = result.iterate.k;
      outcome.certificate = certify_lower(problem, result.iterate.x, result.iterate.nu,
                                          {result.iterate.k, result.wall_seconds});
    } else {
      double elapsed = 0.0;
      Iterate start;
      const UpperProblem exact(config.n);
      if (!config.dump_matrix_path.empty()) dump_problem(exact, config.dump_matrix_path, log);
      start = exact.initial_point();
      if (config.warm_start) {
        const ApproxUpperProblem approx(config.n);
        if (!config.dump_matrix_path.empty()) dump_problem(approx, config.dump_matrix_path, log);
        auto warm = solve_phase(approx, approx.initial_point(), config, log, "approx", outcome);
        outcome.approx_iterations = warm.iterate.k;
        elapsed += warm.wall_seconds;
        try {
          start = lift_approx_solution(exact, approx, warm.iterate);
          outcome.warm_started = true;
        } catch (const std::domain_error& e) {
          log << "warm start unusable (" << e.what() << "); starting from all ones\n";
        }
      }
      auto result = solve_phase(exact, std::move(start), config, log, "upper", outcome);
      outcome.exact_iterations = result.iterate.k;
      elapsed += result.wall_seconds;
      outcome.certificate = certify_upper(
          exact, result.iterate.x, {outcome.approx_iterations + result.iterate.k, elapsed});
    }
  } catch (const SolverError& e) {
    outcome.exit_code = kNonConvergence;
    outcome.error = e.what();
  } catch (const CertificationError& e) {
    outcome.exit_code = kCertificationFailure;
    outcome.error = e.what();
  }

  if (!config.trace_path.empty()) {
    std::ofstream trace(config.trace_path);
    if (!trace) throw std::runtime_error("cannot write trace file " + config.trace_path);
    for (const auto& t : outcome.traces) write_trace_jsonl(trace, t);
  }
  return outcome;
}

}  // namespace nqueens
