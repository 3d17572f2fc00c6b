#include <hybridvi/solvers.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace vi {

OuterSet build_Qn(const Vector& x_n, const Vector& x0) {
  Vector a = x0 - x_n;
  if (a.squaredNorm() == 0.0) return std::nullopt;
  const double b = a.dot(x_n);
  return Halfspace{std::move(a), b};
}

OuterSet build_Cn_alg1(const Vector& x_n, const Vector& x_prev, const Vector& z_next,
                       const Vector& z, const Vector& z_prev, double k, double lambda, double L,
                       double* beta_out) {
  const double beta = k * (x_n - x_prev).squaredNorm() -
                      (1.0 - 1.0 / k - lambda * L) * (z_next - z).squaredNorm() +
                      lambda * L * (z - z_prev).squaredNorm();
  if (beta_out) *beta_out = beta;
  const Vector diff = x_n - z_next;
  // offset in the factored form (x-z)·(x+z) + beta: no cancellation when x ≈ z
  const double b = diff.dot(x_n + z_next) + beta;
  Vector a = 2.0 * diff;
  const double scale = std::max({1.0, x_n.norm(), z_next.norm()});
  if (a.norm() <= 1e-12 * scale) {
    if (b >= -1e-9) return std::nullopt;
    std::ostringstream os;
    os << "EmptyCn: degenerate outer halfspace with offset " << b;
    throw GeometryError(GeometryFault::empty_set, os.str());
  }
  return Halfspace{std::move(a), b};
}

OuterSet build_Cn_ball(const Vector& z, const Vector& x) {
  const Vector diff = x - z;
  if (diff.squaredNorm() == 0.0) return std::nullopt;
  const double b = diff.dot(x + z);
  return Halfspace{2.0 * diff, b};
}

Vector hybrid_outer_step(const Vector& x0, const OuterSet& Cn, const OuterSet& Qn,
                         Counters* counters, double tol) {
  if (!Cn && !Qn) return x0;
  if (Cn && !Qn) {
    if (counters) ++counters->halfspace_projections;
    return project_halfspace(x0, *Cn);
  }
  if (!Cn && Qn) {
    if (counters) ++counters->halfspace_projections;
    return project_halfspace(x0, *Qn);
  }
  if (counters) counters->halfspace_projections += 2;
  return project_two_halfspaces(x0, *Cn, *Qn, tol);
}

namespace {

void check_membership(const Halfspace& h, const Vector& zs, MonitorReport& rep) {
  const double g = h.a.dot(zs) - h.b;
  const double tol = 1e-9 * std::max({1.0, std::abs(h.b), h.a.norm() * zs.norm()});
  if (g > tol) ++rep.membership_violations;
}

RunRecord run_solver(const ProblemInstance& inst, Algorithm alg, const SolverConfig& cfg,
                     const SolveOptions& opt) {
  validate_config(cfg, inst.L, alg);
  if (inst.x0.size() != inst.dim || inst.z0.size() != inst.dim)
    throw std::invalid_argument("solve: start points do not match instance dimension");

  const double lambda = cfg.lambda;
  const double tol_p = cfg.projection_tolerance();

  RunRecord rec;
  rec.algorithm = alg;
  rec.status = SolveStatus::max_iter_exceeded;
  Counters& c = rec.counters;

  const Vector& x0 = inst.x0;
  Vector x = inst.x0, x_prev = inst.x0;
  Vector z = inst.z0, z_prev = inst.z0;

  const bool mon = opt.monitor_solution.has_value();
  Vector zs;
  double anchor_norm = 0.0, dist_prev = 0.0;
  MonitorReport rep;
  if (mon) {
    zs = *opt.monitor_solution;
    anchor_norm = (zs - x0).norm();
  }

  double best_res = std::numeric_limits<double>::infinity();
  Vector best_x = x;
  double last_res = std::numeric_limits<double>::quiet_NaN();

  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  std::chrono::duration<double> excluded{0.0};

  try {
    for (int n = 0; n < cfg.max_iter; ++n) {
      OuterSet Cn, Qn;
      Vector x_next, z_next;
      double beta = 0.0;

      if (alg == Algorithm::alg1) {
        const Vector az = apply(inst.op, z, &c.op_evals);
        z_next = project(x - lambda * az, inst.set, tol_p, &c);
        if (n == 0) {
          x_next = x0;  // C_0 and Q_0 are the whole space
        } else {
          Cn = build_Cn_alg1(x, x_prev, z_next, z, z_prev, cfg.k, lambda, inst.L, &beta);
          Qn = build_Qn(x, x0);
          x_next = hybrid_outer_step(x0, Cn, Qn, &c);
        }
      } else {
        const Vector ax = apply(inst.op, x, &c.op_evals);
        const Vector y = project(x - lambda * ax, inst.set, tol_p, &c);
        const Vector ay = apply(inst.op, y, &c.op_evals);
        if (alg == Algorithm::alg3) {
          const Vector t = x - lambda * ax - y;  // normal of the separating halfspace at y
          const Vector v = x - lambda * ay;
          Vector pt;
          if (t.squaredNorm() == 0.0) {
            pt = v;
          } else {
            ++c.halfspace_projections;
            pt = project_halfspace(v, Halfspace{t, t.dot(y)});
          }
          z_next = cfg.alpha * x + (1.0 - cfg.alpha) * pt;
        } else {
          z_next = y + lambda * (ax - ay);
        }
        Cn = build_Cn_ball(z_next, x);
        Qn = build_Qn(x, x0);
        x_next = hybrid_outer_step(x0, Cn, Qn, &c);
      }

      if (mon) {
        const auto m0 = clock::now();
        if (alg == Algorithm::alg1 && n >= 1) {
          const double lhs = (z_next - zs).squaredNorm();
          const double rhs = (x - zs).squaredNorm() + beta;
          const double excess = (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
          if (excess > 1e-9) ++rep.lemma6_violations;
          if (excess > rep.lemma6_max_violation) rep.lemma6_max_violation = excess;
        }
        if (Cn) check_membership(*Cn, zs, rep);
        if (Qn) check_membership(*Qn, zs, rep);
        const double dn1 = (x_next - x0).norm();
        if (dn1 < dist_prev - 1e-9 * std::max(1.0, dist_prev)) ++rep.fejer_violations;
        if (dn1 > anchor_norm + 1e-9 * std::max(1.0, anchor_norm))
          ++rep.anchor_distance_bound_violations;
        const double step_sq = (x_next - x).squaredNorm();
        if (step_sq > dn1 * dn1 - dist_prev * dist_prev + 1e-9) ++rep.key_inequality_violations;
        rep.sum_sq_steps += step_sq;
        dist_prev = dn1;
        excluded += clock::now() - m0;
      }

      x_prev = x;
      x = x_next;
      z_prev = z;
      z = z_next;

      const double r = natural_residual(x, inst, lambda, tol_p, &c);
      last_res = r;
      rec.iterations = n + 1;
      if (r < best_res) {
        best_res = r;
        best_x = x;
      }

      if (opt.want_trace) {
        const auto m0 = clock::now();
        rec.trace.push_back(TracePoint{n + 1, r, (x - x0).norm(), (z - x).norm()});
        excluded += clock::now() - m0;
      }

      if (r <= cfg.epsilon) {
        rec.status = SolveStatus::converged;
        break;
      }
    }
  } catch (const GeometryError& e) {
    rec.status = SolveStatus::numerical_breakdown;
    std::ostringstream os;
    os << "iteration " << rec.iterations << ": " << e.what();
    rec.note = os.str();
  }

  rec.wall_seconds = std::chrono::duration<double>(clock::now() - t_start).count() -
                     excluded.count();

  if (rec.status == SolveStatus::max_iter_exceeded) {
    rec.final_point = best_x;
    rec.final_residual = best_res;
  } else if (rec.status == SolveStatus::numerical_breakdown) {
    rec.final_point = x;
    rec.final_residual =
        std::isnan(last_res) ? natural_residual(x, inst, lambda, tol_p, &c) : last_res;
  } else {
    rec.final_point = x;
    rec.final_residual = last_res;
  }

  if (mon) {
    if (rep.sum_sq_steps > anchor_norm * anchor_norm + 1e-6) rep.step_sum_violations = 1;
    rec.monitor = rep;
  }
  return rec;
}

}  // namespace

RunRecord solve_alg1(const ProblemInstance& instance, const SolverConfig& config,
                     const SolveOptions& options) {
  return run_solver(instance, Algorithm::alg1, config, options);
}

RunRecord solve_alg3(const ProblemInstance& instance, const SolverConfig& config,
                     const SolveOptions& options) {
  return run_solver(instance, Algorithm::alg3, config, options);
}

RunRecord solve_alg4(const ProblemInstance& instance, const SolverConfig& config,
                     const SolveOptions& options) {
  return run_solver(instance, Algorithm::alg4, config, options);
}

RunRecord solve(const ProblemInstance& instance, Algorithm algorithm, const SolverConfig& config,
                const SolveOptions& options) {
  return run_solver(instance, algorithm, config, options);
}

}  // namespace vi
