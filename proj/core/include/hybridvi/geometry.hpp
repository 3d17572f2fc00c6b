#pragma once

#include <hybridvi/types.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vi {

// {w : <a,w> <= b}.  a == 0 is the degenerate whole-space reading when b >= 0.
struct Halfspace {
  Vector a;
  double b = 0.0;
};

struct WholeSpace {};

struct Polyhedron {
  std::vector<Halfspace> faces;  // nonempty
};

// {x >= 0, sum x_i = m}
struct ScaledSimplex {
  double m = 1.0;
  int dim = 1;
};

struct Box {
  Vector lower;
  Vector upper;  // lower <= upper componentwise
};

using ConvexSet = std::variant<WholeSpace, Halfspace, Polyhedron, ScaledSimplex, Box>;

enum class GeometryFault { empty_set, empty_intersection, no_convergence };

class GeometryError : public std::runtime_error {
 public:
  GeometryError(GeometryFault fault, const std::string& what)
      : std::runtime_error(what), fault_(fault) {}
  GeometryFault fault() const { return fault_; }

 private:
  GeometryFault fault_;
};

inline constexpr std::int64_t kDefaultSweepCap = 2'000'000;

Vector project_halfspace(const Vector& p, const Halfspace& h);

// Exact nearest point of h1 ∩ h2 by case analysis (feasible / one face active /
// corner via the 2x2 Gram system / parallel normals as a slab on the common
// axis).  All scalar reductions run in double-double arithmetic: the corner
// multipliers come out of a difference of nearly equal inner products, and the
// outer solver feeds this kernel halfspaces whose normals collapse toward
// parallel as it converges.  tol is in distance units.
Vector project_two_halfspaces(const Vector& p, const Halfspace& h1, const Halfspace& h2,
                              double tol = 1e-12);

Vector project_scaled_simplex(const Vector& p, double m);

Vector project_box(const Vector& p, const Box& box);

// Cyclic sweeps over the faces in fixed list order with per-face correction
// vectors (Dykstra), so the limit is the metric projection, not just a
// feasible point.  Stops when a full sweep moves the point by at most
// tol*max(1,||w||) and the worst violation (distance units) is within the same
// bound.
Vector project_polyhedron_cyclic(const Vector& p, const std::vector<Halfspace>& faces,
                                 double tol, std::int64_t sweep_cap = kDefaultSweepCap,
                                 Counters* counters = nullptr);

Vector project(const Vector& p, const ConvexSet& set, double tol, Counters* counters = nullptr);

// Worst constraint violation in distance units (0 when p is in the set).
double max_violation(const Vector& p, const ConvexSet& set);

bool contains(const Vector& p, const ConvexSet& set, double tol);

}  // namespace vi
