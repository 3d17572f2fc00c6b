#pragma once

#include <hybridvi/geometry.hpp>
#include <hybridvi/operators.hpp>
#include <hybridvi/types.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace vi {

struct GeneratorInfo {
  std::string family;  // "polytope_translation" | "hphard"
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
};

struct ProblemInstance {
  std::string instance_id;
  int dim = 0;
  AffineOperator op;
  ConvexSet set;
  double L = 0.0;
  Vector x0;
  Vector z0;
  std::optional<Vector> known_solution;
  std::optional<GeneratorInfo> generator;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Random polytope with strictly feasible origin (unit-sphere normals, offsets
// in [0.5, 2]) and the translation operator A(x) = x - u, u componentwise in
// [-5, 5]; L = 1, x0 = z0 = 0.  The solution is P_C(u), recorded from the
// oracle.
ProblemInstance gen_polytope_translation(int dim, int n_constraints, std::uint64_t seed);

// M = A A^T + B + D with A entries in (-5,5), B skew-symmetric from a (-5,5)
// strict upper triangle, D diagonal in (0, 0.3); q in (-500, 0); feasible set
// {x >= 0, sum x = dim}; x0 = z0 = ones; L is the measured spectral norm.
ProblemInstance gen_hphard(int dim, std::uint64_t seed);

// Independent reference solution: nearest-point computation for the
// translation family, a long-double projected-gradient fixed point (tiny step,
// contraction by strong monotonicity) otherwise.  Never reuses a benchmarked
// algorithm.
Vector solve_oracle(const ProblemInstance& instance, double tol);

// ||x - P_C(x - lambda*A(x))||.  The evaluation and projection spent here land
// in the termination-check counters.
double natural_residual(const Vector& x, const ProblemInstance& instance, double lambda,
                        double proj_tol, Counters* counters = nullptr);

std::string save_instance(const ProblemInstance& instance);
ProblemInstance load_instance(const std::string& text);

void save_instance_file(const ProblemInstance& instance, const std::string& path);
ProblemInstance load_instance_file(const std::string& path);

}  // namespace vi
