#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace vi::testing {

Vector dykstra_halfspaces(const Vector& p, const std::vector<Halfspace>& faces, double tol,
                          int max_sweeps) {
  const auto m = static_cast<int>(faces.size());
  Vector w = p;
  std::vector<Vector> corr(faces.size(), Vector::Zero(p.size()));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < m; ++i) {
      const Vector y = w + corr[i];
      const double asq = faces[i].a.squaredNorm();
      if (asq == 0.0) continue;
      const double g = faces[i].a.dot(y) - faces[i].b;
      Vector w_next = y;
      if (g > 0.0) w_next -= (g / asq) * faces[i].a;
      corr[i] = y - w_next;
      moved += (w_next - w).norm();
      w = w_next;
    }
    double viol = 0.0;
    for (const auto& f : faces) {
      const double an = f.a.norm();
      if (an == 0.0) continue;
      viol = std::max(viol, (f.a.dot(w) - f.b) / an);
    }
    const double scale = std::max(1.0, w.norm());
    if (moved <= tol * scale && viol <= tol * scale) return w;
  }
  throw std::runtime_error("dykstra_halfspaces: sweep cap reached");
}

Vector simplex_michelot(const Vector& p, double m) {
  const auto n = static_cast<int>(p.size());
  std::vector<char> active(static_cast<size_t>(n), 1);
  Vector x = p;
  int cnt = n;
  for (;;) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      if (active[static_cast<size_t>(i)]) sum += x[i];
    const double shift = (m - sum) / cnt;
    for (int i = 0; i < n; ++i)
      if (active[static_cast<size_t>(i)]) x[i] += shift;
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      if (active[static_cast<size_t>(i)] && x[i] < 0.0) {
        x[i] = 0.0;
        active[static_cast<size_t>(i)] = 0;
        --cnt;
        changed = true;
      }
    }
    if (!changed) return x;
    if (cnt == 0) throw std::runtime_error("simplex_michelot: empty support");
  }
}

Vector grid_oracle_2d(const Vector& p, const std::function<bool(double, double)>& feasible,
                      double lo, double hi, double h) {
  double best = std::numeric_limits<double>::infinity();
  Vector w(2);
  bool found = false;
  for (double x = lo; x <= hi + h / 2; x += h) {
    for (double y = lo; y <= hi + h / 2; y += h) {
      if (!feasible(x, y)) continue;
      const double d = (p[0] - x) * (p[0] - x) + (p[1] - y) * (p[1] - y);
      if (d < best) {
        best = d;
        w << x, y;
        found = true;
      }
    }
  }
  if (!found) throw std::runtime_error("grid_oracle_2d: no feasible grid point");
  return w;
}

Vector lcp_simplex_enumeration(const Matrix& M, const Vector& q, double m) {
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const auto n = static_cast<int>(q.size());
  if (n > 20) throw std::invalid_argument("lcp_simplex_enumeration: dim too large");
  const MatrixL Ml = M.cast<long double>();
  const VectorL ql = q.cast<long double>();
  const long double tol = 1e-9L;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> F;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) F.push_back(i);
    const auto k = static_cast<int>(F.size());
    MatrixL K = MatrixL::Zero(k + 1, k + 1);
    VectorL rhs(k + 1);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) K(r, c) = Ml(F[static_cast<size_t>(r)], F[static_cast<size_t>(c)]);
      K(r, k) = -1.0L;
      K(k, r) = 1.0L;
      rhs[r] = -ql[F[static_cast<size_t>(r)]];
    }
    rhs[k] = static_cast<long double>(m);
    Eigen::FullPivLU<MatrixL> lu(K);
    if (!lu.isInvertible()) continue;
    const VectorL sol = lu.solve(rhs);
    bool ok = true;
    for (int r = 0; r < k; ++r)
      if (sol[r] < -tol) ok = false;
    if (!ok) continue;
    VectorL x = VectorL::Zero(n);
    for (int r = 0; r < k; ++r) x[F[static_cast<size_t>(r)]] = std::max(sol[r], 0.0L);
    const long double mu = sol[k];
    const VectorL v = Ml * x + ql;
    long double scale = std::max<long double>(1.0L, std::abs(mu));
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(v[i]));
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i)) && v[i] - mu < -tol * scale) ok = false;
    }
    if (!ok) continue;
    return x.cast<double>();
  }
  throw std::runtime_error("lcp_simplex_enumeration: no KKT support found");
}

TwoHalfspaceCase sample_two_halfspace_case(Rng& rng, int dim) {
  TwoHalfspaceCase c;
  c.h1.a = rng.unit_sphere(dim);
  do {
    c.h2.a = rng.unit_sphere(dim);
  } while (std::abs(c.h1.a.dot(c.h2.a)) > 0.999);
  c.h1.b = rng.uniform(-1.0, 1.0);
  c.h2.b = rng.uniform(-1.0, 1.0);
  c.p = 3.0 * rng.normal_vector(dim);
  return c;
}

}  // namespace vi::testing
