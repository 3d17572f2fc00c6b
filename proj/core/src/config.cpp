#include <hybridvi/types.hpp>

#include <sstream>

namespace vi {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::alg1: return "alg1";
    case Algorithm::alg3: return "alg3";
    case Algorithm::alg4: return "alg4";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  if (name == "alg1") return Algorithm::alg1;
  if (name == "alg3") return Algorithm::alg3;
  if (name == "alg4") return Algorithm::alg4;
  return std::nullopt;
}

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter_exceeded: return "max_iter_exceeded";
    case SolveStatus::numerical_breakdown: return "numerical_breakdown";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(ConfigFault fault, const std::string& msg) { throw ConfigError(fault, msg); }

}  // namespace

void validate_config(const SolverConfig& c, double L, Algorithm algorithm) {
  std::ostringstream os;
  if (!(L > 0.0)) {
    os << "NonPositiveParameter: Lipschitz constant L = " << L << " must be positive";
    fail(ConfigFault::non_positive_parameter, os.str());
  }
  if (!(c.lambda > 0.0)) {
    os << "NonPositiveParameter: lambda = " << c.lambda << " must be positive";
    fail(ConfigFault::non_positive_parameter, os.str());
  }
  if (!(c.epsilon > 0.0)) {
    os << "NonPositiveParameter: epsilon = " << c.epsilon << " must be positive";
    fail(ConfigFault::non_positive_parameter, os.str());
  }
  if (c.max_iter < 1) {
    os << "NonPositiveParameter: max_iter = " << c.max_iter << " must be at least 1";
    fail(ConfigFault::non_positive_parameter, os.str());
  }
  if (!(c.projection_tolerance() > 0.0)) {
    os << "NonPositiveParameter: proj_tol = " << c.projection_tolerance() << " must be positive";
    fail(ConfigFault::non_positive_parameter, os.str());
  }
  if (algorithm == Algorithm::alg1) {
    if (!(c.k > 0.0)) {
      os << "NonPositiveParameter: k = " << c.k << " must be positive";
      fail(ConfigFault::non_positive_parameter, os.str());
    }
    if (!(c.lambda < 1.0 / (2.0 * L))) {
      os << "StepSizeTooLarge: lambda = " << c.lambda << " must lie in (0, 1/(2L)) = (0, "
         << 1.0 / (2.0 * L) << ")";
      fail(ConfigFault::step_size_too_large, os.str());
    }
    const double k_bound = 1.0 / (1.0 - 2.0 * c.lambda * L);
    if (!(c.k > k_bound)) {
      os << "KTooSmall: k = " << c.k << " must exceed 1/(1-2*lambda*L) = " << k_bound;
      fail(ConfigFault::k_too_small, os.str());
    }
  } else {
    if (!(c.lambda < 1.0 / L)) {
      os << "StepSizeTooLarge: lambda = " << c.lambda << " must lie in (0, 1/L) = (0, " << 1.0 / L
         << ")";
      fail(ConfigFault::step_size_too_large, os.str());
    }
    if (algorithm == Algorithm::alg3 && !(c.alpha >= 0.0 && c.alpha < 1.0)) {
      os << "AlphaOutOfRange: alpha = " << c.alpha << " must lie in [0, 1)";
      fail(ConfigFault::alpha_out_of_range, os.str());
    }
  }
}

}  // namespace vi
