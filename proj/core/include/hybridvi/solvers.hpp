#pragma once

#include <hybridvi/geometry.hpp>
#include <hybridvi/problems.hpp>
#include <hybridvi/types.hpp>

#include <optional>

namespace vi {

// Outer-approximation halfspaces; nullopt means the whole space.
using OuterSet = std::optional<Halfspace>;

// {w : <x_n - w, x0 - x_n> >= 0} rewritten as <x0 - x_n, w> <= <x0 - x_n, x_n>.
OuterSet build_Qn(const Vector& x_n, const Vector& x0);

// Expansion of ||z_next - w||^2 <= ||x_n - w||^2 + beta_n with
// beta_n = k||x_n - x_prev||^2 - (1 - 1/k - lambda*L)||z_next - z||^2
//        + lambda*L||z - z_prev||^2.
// Normal 2(x_n - z_next); the offset is computed in the factored form
// (x_n - z_next)·(x_n + z_next) + beta_n, which stays accurate when
// x_n ≈ z_next.  Near-zero normal collapses to the whole space when the
// offset is not significantly negative, else the set is empty and the run has
// broken down.
OuterSet build_Cn_alg1(const Vector& x_n, const Vector& x_prev, const Vector& z_next,
                       const Vector& z, const Vector& z_prev, double k, double lambda, double L,
                       double* beta_out = nullptr);

// beta = 0 specialization: {w : ||z - w|| <= ||x - w||}.
OuterSet build_Cn_ball(const Vector& z, const Vector& x);

// P_{Cn ∩ Qn} x0 with the single-halfspace / identity reductions.
Vector hybrid_outer_step(const Vector& x0, const OuterSet& Cn, const OuterSet& Qn,
                         Counters* counters = nullptr, double tol = 1e-12);

struct SolveOptions {
  bool want_trace = false;
  // When set, per-iteration invariant checks run against this solution
  // (outside the timed region) and land in RunRecord::monitor.
  std::optional<Vector> monitor_solution;
};

RunRecord solve_alg1(const ProblemInstance& instance, const SolverConfig& config,
                     const SolveOptions& options = {});
RunRecord solve_alg3(const ProblemInstance& instance, const SolverConfig& config,
                     const SolveOptions& options = {});
RunRecord solve_alg4(const ProblemInstance& instance, const SolverConfig& config,
                     const SolveOptions& options = {});

RunRecord solve(const ProblemInstance& instance, Algorithm algorithm, const SolverConfig& config,
                const SolveOptions& options = {});

}  // namespace vi
