#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Algorithm { alg1, alg3, alg4 };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

// Step-size and expansion parameters for the three methods.  `lambda` is the
// absolute step; the admissible region depends on the operator's Lipschitz
// constant L, so validation is a separate call.  `proj_tol` is the inner
// tolerance for iterative feasible-set projections and defaults to epsilon/10.
struct SolverConfig {
  double lambda = 0.0;
  double k = 3.0;       // alg1 only
  double alpha = 0.5;   // alg3 only, in [0,1)
  double epsilon = 1e-3;
  int max_iter = 100000;
  std::optional<double> proj_tol;

  double projection_tolerance() const { return proj_tol ? *proj_tol : epsilon / 10.0; }
};

enum class ConfigFault {
  step_size_too_large,
  k_too_small,
  non_positive_parameter,
  alpha_out_of_range,
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigFault fault, const std::string& what)
      : std::runtime_error(what), fault_(fault) {}
  ConfigFault fault() const { return fault_; }

 private:
  ConfigFault fault_;
};

// Throws ConfigError naming the violated bound.  alg1 requires
// lambda in (0, 1/(2L)) and k > 1/(1 - 2*lambda*L); alg3/alg4 require
// lambda in (0, 1/L); alg3 additionally requires alpha in [0,1).
void validate_config(const SolverConfig& config, double L, Algorithm algorithm);

// Operator evaluations and projections performed inside solver steps are
// tallied separately from the ones spent on termination checks, so per-step
// counts can be compared against the methods' nominal cost (one operator
// value per step for alg1, two for alg3/alg4).
struct Counters {
  std::int64_t op_evals = 0;
  std::int64_t projections = 0;
  std::int64_t check_op_evals = 0;
  std::int64_t check_projections = 0;
  std::int64_t halfspace_projections = 0;  // individual halfspace projections, all contexts
};

enum class SolveStatus { converged, max_iter_exceeded, numerical_breakdown };

const char* solve_status_name(SolveStatus s);

struct TracePoint {
  int n = 0;
  double residual = 0.0;
  double anchor_dist = 0.0;  // ||x_n - x0||
  double z_gap = 0.0;        // ||z_n - x_n||
};

struct MonitorReport {
  double lemma6_max_violation = 0.0;  // max positive relative excess, 0 when never violated
  std::int64_t lemma6_violations = 0;
  std::int64_t membership_violations = 0;
  std::int64_t fejer_violations = 0;  // anchor-distance monotonicity failures
  std::int64_t anchor_distance_bound_violations = 0;
  std::int64_t key_inequality_violations = 0;
  std::int64_t step_sum_violations = 0;  // set at finalize, 0 or 1
  double sum_sq_steps = 0.0;

  std::int64_t total_violations() const {
    return lemma6_violations + membership_violations + fejer_violations +
           anchor_distance_bound_violations + key_inequality_violations + step_sum_violations;
  }
};

struct RunRecord {
  Algorithm algorithm = Algorithm::alg1;
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;
  Counters counters;
  double wall_seconds = 0.0;
  double final_residual = 0.0;
  Vector final_point;
  std::string note;  // diagnostic text on breakdown
  std::vector<TracePoint> trace;
  std::optional<MonitorReport> monitor;
};

}  // namespace vi
