#include <hybridvi/compensated.hpp>
#include <hybridvi/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace vi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// w = p + (t/n) * a, assembled coordinatewise in double-double and rounded once
Vector axis_move(const Vector& p, const Vector& a, Dd n, Dd t) {
  const Dd c = t / n;
  Vector w(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) w[i] = (Dd(p[i]) + c * Dd(a[i])).to_double();
  return w;
}

}  // namespace

Vector project_halfspace(const Vector& p, const Halfspace& h) {
  const double asq = h.a.squaredNorm();
  if (asq == 0.0) {
    if (h.b >= 0.0) return p;
    std::ostringstream os;
    os << "EmptySet: zero normal with negative offset b = " << h.b;
    throw GeometryError(GeometryFault::empty_set, os.str());
  }
  const double g = h.a.dot(p) - h.b;
  if (g <= 0.0) return p;
  return p - (g / asq) * h.a;
}

Vector project_two_halfspaces(const Vector& p, const Halfspace& h1, const Halfspace& h2,
                              double tol) {
  if (h1.a.squaredNorm() == 0.0) {
    if (h1.b < 0.0)
      throw GeometryError(GeometryFault::empty_set, "EmptySet: zero normal with negative offset");
    return project_halfspace(p, h2);
  }
  if (h2.a.squaredNorm() == 0.0) {
    if (h2.b < 0.0)
      throw GeometryError(GeometryFault::empty_set, "EmptySet: zero normal with negative offset");
    return project_halfspace(p, h1);
  }

  const Vector& a1 = h1.a;
  const Vector& a2 = h2.a;
  const Dd n1 = dd_sqrt(dd_dot(a1, a1));
  const Dd n2 = dd_sqrt(dd_dot(a2, a2));
  const Dd d1 = (dd_dot(a1, p) - Dd(h1.b)) / n1;  // signed distances to the boundaries
  const Dd d2 = (dd_dot(a2, p) - Dd(h2.b)) / n2;
  const Dd tol_s = Dd(tol) * dd_sqrt(dd_max(Dd(1.0), dd_dot(p, p)));

  if (d1 <= tol_s && d2 <= tol_s) return p;

  const Dd chat = dd_dot(a1, a2) / (n1 * n2);
  const Dd sin2 = Dd(1.0) - chat * chat;

  if (sin2 <= Dd(1e-24)) {
    // Parallel normals: the slab geometry lives on the u1 = a1/||a1|| axis.
    const Dd t = dd_dot(a1, p) / n1;
    const Dd tmax1 = Dd(h1.b) / n1;
    if (chat > Dd(0.0)) {
      const Dd tm = dd_min(tmax1, Dd(h2.b) / n2);  // nested: tighter bound wins
      if (t <= tm) return p;
      return axis_move(p, a1, n1, tm - t);
    }
    const Dd tmin = -(Dd(h2.b) / n2);  // opposed normals bound t from below
    if (tmin > tmax1 + tol_s) {
      std::ostringstream os;
      os << "EmptyIntersection: opposed parallel halfspaces with gap "
         << (tmin - tmax1).to_double();
      throw GeometryError(GeometryFault::empty_intersection, os.str());
    }
    const Dd lo = dd_min(tmin, tmax1);
    Dd tcl = t;
    if (tcl < lo) tcl = lo;
    if (tcl > tmax1) tcl = tmax1;
    return axis_move(p, a1, n1, tcl - t);
  }

  // Candidates as normalized multipliers (m1, m2): w = p - m1*u1 - m2*u2 with
  // squared distance m1^2 + m2^2 + 2*chat*m1*m2; the nearest feasible one wins.
  bool have = false;
  bool face_candidate = false;
  Dd best1(0.0), best2(0.0), best_dsq(0.0);
  auto consider = [&](Dd m1, Dd m2) {
    const Dd dsq = m1 * m1 + m2 * m2 + Dd(2.0) * chat * m1 * m2;
    if (!have || dsq < best_dsq) {
      best1 = m1;
      best2 = m2;
      best_dsq = dsq;
      have = true;
    }
  };
  if (d1 > Dd(0.0) && d2 - chat * d1 <= tol_s) {  // face-1 foot, feasible for face 2
    consider(d1, Dd(0.0));
    face_candidate = true;
  }
  if (d2 > Dd(0.0) && d1 - chat * d2 <= tol_s) {
    consider(Dd(0.0), d2);
    face_candidate = true;
  }
  // Corner multipliers from the normalized Gram system; admissible when both
  // are nonnegative (KKT), and the fallback when no single face qualifies.
  const Dd nu2 = (d2 - chat * d1) / sin2;
  const Dd nu1 = d1 - chat * nu2;
  if ((nu1 >= -tol_s && nu2 >= -tol_s) || !face_candidate) consider(nu1, nu2);

  const Dd c1 = best1 / n1;
  const Dd c2 = best2 / n2;
  Vector w(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    w[i] = (Dd(p[i]) - c1 * Dd(a1[i]) - c2 * Dd(a2[i])).to_double();
  return w;
}

Vector project_scaled_simplex(const Vector& p, double m) {
  const int n = static_cast<int>(p.size());
  if (n < 1) throw std::invalid_argument("project_scaled_simplex: empty point");
  if (!(m > 0.0)) throw std::invalid_argument("project_scaled_simplex: m must be positive");
  std::vector<double> u(p.data(), p.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double tau = 0.0;
  for (int j = 0; j < n; ++j) {
    css += u[j];
    const double t = (css - m) / (j + 1);
    if (u[j] - t > 0.0) tau = t;  // cumulative-sum condition: last valid prefix wins
  }
  Vector w(n);
  for (int i = 0; i < n; ++i) w[i] = std::max(0.0, p[i] - tau);
  return w;
}

Vector project_box(const Vector& p, const Box& box) {
  if (box.lower.size() != p.size() || box.upper.size() != p.size())
    throw std::invalid_argument("project_box: dimension mismatch");
  if (((box.upper - box.lower).array() < 0.0).any())
    throw GeometryError(GeometryFault::empty_set, "EmptySet: box with lower > upper");
  return p.cwiseMax(box.lower).cwiseMin(box.upper);
}

Vector project_polyhedron_cyclic(const Vector& p, const std::vector<Halfspace>& faces, double tol,
                                 std::int64_t sweep_cap, Counters* counters) {
  if (faces.empty()) throw std::invalid_argument("project_polyhedron_cyclic: empty face list");
  if (!(tol > 0.0)) throw std::invalid_argument("project_polyhedron_cyclic: tol must be positive");
  const int m = static_cast<int>(faces.size());
  const Eigen::Index d = p.size();
  std::vector<double> asq(m), anorm(m);
  for (int i = 0; i < m; ++i) {
    if (faces[i].a.size() != d)
      throw std::invalid_argument("project_polyhedron_cyclic: face dimension mismatch");
    asq[i] = faces[i].a.squaredNorm();
    anorm[i] = std::sqrt(asq[i]);
    if (asq[i] == 0.0 && faces[i].b < 0.0)
      throw GeometryError(GeometryFault::empty_set, "EmptySet: zero normal with negative offset");
  }

  // Cyclic sweeps with per-face correction vectors: each face sees the current
  // point plus what it subtracted last time, which steers the limit to the
  // metric projection instead of an arbitrary feasible point.
  Vector w = p;
  std::vector<Vector> corr(m, Vector::Zero(d));
  Vector y(d), prev(d);
  for (std::int64_t sweep = 0; sweep < sweep_cap; ++sweep) {
    prev = w;
    for (int i = 0; i < m; ++i) {
      if (asq[i] == 0.0) continue;  // whole-space face
      y = w + corr[i];
      const double g = faces[i].a.dot(y) - faces[i].b;
      w = (g > 0.0) ? Vector(y - (g / asq[i]) * faces[i].a) : y;
      corr[i] = y - w;
      if (counters) ++counters->halfspace_projections;
    }
    double viol = 0.0;
    for (int i = 0; i < m; ++i)
      if (asq[i] != 0.0) viol = std::max(viol, (faces[i].a.dot(w) - faces[i].b) / anorm[i]);
    const double scale = std::max(1.0, w.norm());
    if ((w - prev).norm() <= tol * scale && viol <= tol * scale) return w;
  }
  throw GeometryError(GeometryFault::no_convergence,
                      "NoConvergence: cyclic projection sweep cap exhausted");
}

Vector project(const Vector& p, const ConvexSet& set, double tol, Counters* counters) {
  if (counters) ++counters->projections;
  return std::visit(
      overloaded{
          [&](const WholeSpace&) -> Vector { return p; },
          [&](const Halfspace& h) -> Vector {
            if (counters) ++counters->halfspace_projections;
            return project_halfspace(p, h);
          },
          [&](const Polyhedron& poly) -> Vector {
            return project_polyhedron_cyclic(p, poly.faces, tol, kDefaultSweepCap, counters);
          },
          [&](const ScaledSimplex& sx) -> Vector {
            if (sx.dim != p.size())
              throw std::invalid_argument("project: simplex dimension mismatch");
            return project_scaled_simplex(p, sx.m);
          },
          [&](const Box& box) -> Vector { return project_box(p, box); },
      },
      set);
}

double max_violation(const Vector& p, const ConvexSet& set) {
  const auto halfspace_violation = [&](const Halfspace& h) {
    const double n = h.a.norm();
    if (n == 0.0) return h.b >= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::max(0.0, (h.a.dot(p) - h.b) / n);
  };
  return std::visit(
      overloaded{
          [&](const WholeSpace&) { return 0.0; },
          [&](const Halfspace& h) { return halfspace_violation(h); },
          [&](const Polyhedron& poly) {
            double v = 0.0;
            for (const auto& h : poly.faces) v = std::max(v, halfspace_violation(h));
            return v;
          },
          [&](const ScaledSimplex& sx) {
            double v = 0.0;
            for (Eigen::Index i = 0; i < p.size(); ++i) v = std::max(v, -p[i]);
            const double gap = std::abs(p.sum() - sx.m) / std::sqrt(static_cast<double>(p.size()));
            return std::max(v, gap);
          },
          [&](const Box& box) {
            double v = 0.0;
            for (Eigen::Index i = 0; i < p.size(); ++i)
              v = std::max({v, box.lower[i] - p[i], p[i] - box.upper[i]});
            return v;
          },
      },
      set);
}

bool contains(const Vector& p, const ConvexSet& set, double tol) {
  return max_violation(p, set) <= tol;
}

}  // namespace vi
