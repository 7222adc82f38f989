// Certified lower and upper bounds on the n-queens constant.
//
//   nqueens_bounds --n 2048 --bound lower
//   nqueens_bounds --n 1024 --bound upper --trace upper.jsonl
//
// Progress goes to stderr, the certificate to stdout. Exit status: 0 certified,
// 1 usage error, 2 Newton method did not converge, 3 certification failed.

#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "nqueens/driver.hpp"

int main(int argc, char** argv) {
  using namespace nqueens;
  CLI::App app{"Certified bounds on the n-queens constant"};
  RunConfig cfg;
  long long n = 0;
  bool no_warm_start = false;

  app.add_option("--n", n, "Board discretisation (n >= 1)")->required()->check(CLI::PositiveNumber);
  app.add_option("--bound", cfg.bound, "Which bound to certify")
      ->required()
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, BoundKind>{{"lower", BoundKind::Lower}, {"upper", BoundKind::Upper}},
          CLI::ignore_case));
  app.add_option("--eps", cfg.newton.eps, "Stop when the residual norm falls below this")
      ->capture_default_str();
  app.add_option("--alpha", cfg.newton.alpha, "Sufficient-decrease parameter")->capture_default_str();
  app.add_option("--beta", cfg.newton.beta, "Backtracking factor")->capture_default_str();
  app.add_option("--max-iters", cfg.newton.max_iters, "Newton iteration cap per phase")
      ->capture_default_str();
  app.add_option("--minres-tol", cfg.newton.minres_rel_tol, "MINRES relative tolerance")
      ->capture_default_str();
  app.add_option("--minres-max-iters", cfg.newton.minres_max_iters,
                 "MINRES iteration cap (0: four times the number of constraints)")
      ->capture_default_str();
  app.add_flag("--jacobi", cfg.newton.jacobi_preconditioner, "Diagonally precondition MINRES");
  app.add_flag("--no-warm-start", no_warm_start, "Upper bound: skip the approximate first phase");
  app.add_option("--output", cfg.output, "Certificate format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, OutputFormat>{{"json", OutputFormat::Json}, {"text", OutputFormat::Text}},
          CLI::ignore_case))
      ->default_str("json");
  app.add_option("--trace", cfg.trace_path, "Write per-iteration records (JSON lines) to FILE");
  app.add_option("--dump-matrix", cfg.dump_matrix_path,
                 "Write A and b in Matrix Market format to PREFIX_<kind>_n<n>_{A,b}.mtx");
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  cfg.n = static_cast<Index>(n);
  cfg.warm_start = !no_warm_start;

  RunOutcome outcome;
  try {
    outcome = run(cfg, std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  }

  if (outcome.exit_code != kCertified) {
    std::cerr << (outcome.exit_code == kNonConvergence ? "not converged: " : "not certified: ")
              << outcome.error << "\n";
    return outcome.exit_code;
  }
  if (cfg.output == OutputFormat::Json)
    std::cout << to_json(*outcome.certificate) << "\n";
  else
    std::cout << to_text(*outcome.certificate) << "\n";
  return kCertified;
}
