#pragma once

#include <hybridvi/types.hpp>

#include <cstdint>
#include <stdexcept>

namespace vi {

class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A(x) = Mx + q
struct AffineOperator {
  Matrix M;
  Vector q;

  int dim() const { return static_cast<int>(q.size()); }
};

// tally, when given, points at the counter the evaluation belongs to
// (solver-step vs termination-check).
Vector apply(const AffineOperator& op, const Vector& x, std::int64_t* tally = nullptr);

// Largest singular value via power iteration on M^T M from a fixed seeded
// start; the result is inflated by (1 + 10*tol) so it upper-bounds the true
// norm and stays a valid Lipschitz constant.
double spectral_norm(const Matrix& M, double tol = 1e-12, int iter_cap = 100000);

struct MonotoneCheck {
  bool ok = true;
  double worst = 0.0;  // min over samples of <Ax-Ay, x-y> / ||x-y||^2
  Vector x, y;         // worst witness pair
};

MonotoneCheck check_monotone_sample(const AffineOperator& op, int n_samples, std::uint64_t seed);

struct LipschitzCheck {
  bool ok = true;
  double worst_ratio = 0.0;  // max over samples of ||Ax-Ay|| / ||x-y||
  Vector x, y;
};

// Samples include the coordinate directions first, then random pairs, so
// diagonal operators cannot hide their largest gain from the check.
LipschitzCheck check_lipschitz_sample(const AffineOperator& op, double L, int n_samples,
                                      std::uint64_t seed);

}  // namespace vi
