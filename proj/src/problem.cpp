#include "nqueens/problem.hpp"

#include <stdexcept>

namespace nqueens {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Lower:
      return "lower";
    case ProblemKind::Upper:
      return "upper";
    case ProblemKind::ApproxUpper:
      return "approx-upper";
  }
  return "unknown";
}

void Problem::require_nonnegative(const Vector& x, const char* what) {
  // written so that NaN fails the test
  if (!(x.array() >= 0.0).all()) throw std::domain_error(what);
}

void Problem::require_positive(const Vector& x, const char* what) {
  if (!(x.array() > 0.0).all()) throw std::domain_error(what);
}

void Problem::require_size(const Vector& x, const char* what) const {
  if (x.size() != num_variables()) throw std::invalid_argument(what);
}

}  // namespace nqueens
