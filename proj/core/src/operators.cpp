#include <hybridvi/operators.hpp>
#include <hybridvi/rng.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vi {

Vector apply(const AffineOperator& op, const Vector& x, std::int64_t* tally) {
  if (op.M.rows() != op.M.cols() || op.M.cols() != x.size() || op.q.size() != x.size()) {
    std::ostringstream os;
    os << "DimensionMismatch: operator is " << op.M.rows() << "x" << op.M.cols() << " with q of "
       << op.q.size() << ", point has " << x.size();
    throw std::invalid_argument(os.str());
  }
  if (tally) ++*tally;
  return op.M * x + op.q;
}

double spectral_norm(const Matrix& M, double tol, int iter_cap) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw std::invalid_argument("spectral_norm: matrix must be square and nonempty");
  if (M.isZero(0.0)) return 0.0;
  const int n = static_cast<int>(M.rows());
  const Matrix G = M.transpose() * M;
  Rng rng(0x9e3779b97f4a7c15ull);  // fixed start: deterministic result
  Vector v = rng.unit_sphere(n);
  double prev = -1.0;
  for (int it = 0; it < iter_cap; ++it) {
    Vector w = G * v;
    const double nw = w.norm();
    if (nw <= 1e-300) {  // start vector fell in the kernel; re-seed direction
      v = rng.unit_sphere(n);
      prev = -1.0;
      continue;
    }
    v = w / nw;
    const double est = nw;  // -> sigma_max^2
    if (prev >= 0.0 && std::abs(est - prev) <= tol * est)
      return std::sqrt(est) * (1.0 + 10.0 * tol);
    prev = est;
  }
  throw NoConvergence("NoConvergence: power iteration on M^T M hit the iteration cap");
}

MonotoneCheck check_monotone_sample(const AffineOperator& op, int n_samples, std::uint64_t seed) {
  Rng rng(seed);
  const int d = op.dim();
  MonotoneCheck out;
  out.worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    Vector x = rng.uniform_vector(d, -10.0, 10.0);
    Vector y = rng.uniform_vector(d, -10.0, 10.0);
    const Vector diff = x - y;
    const double dsq = diff.squaredNorm();
    if (dsq == 0.0) continue;
    const double r = (apply(op, x) - apply(op, y)).dot(diff) / dsq;
    if (r < out.worst) {
      out.worst = r;
      out.x = std::move(x);
      out.y = std::move(y);
    }
  }
  if (!std::isfinite(out.worst)) out.worst = 0.0;
  out.ok = out.worst >= -1e-9 * std::max(1.0, op.M.norm());
  return out;
}

LipschitzCheck check_lipschitz_sample(const AffineOperator& op, double L, int n_samples,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const int d = op.dim();
  LipschitzCheck out;
  auto probe = [&](const Vector& x, const Vector& y) {
    const Vector diff = x - y;
    const double nd = diff.norm();
    if (nd == 0.0) return;
    const double r = (apply(op, x) - apply(op, y)).norm() / nd;
    if (r > out.worst_ratio) {
      out.worst_ratio = r;
      out.x = x;
      out.y = y;
    }
  };
  const Vector zero = Vector::Zero(d);
  for (int i = 0; i < d && i < n_samples; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = 1.0;
    probe(e, zero);
  }
  for (int s = d; s < n_samples; ++s)
    probe(rng.uniform_vector(d, -5.0, 5.0), rng.uniform_vector(d, -5.0, 5.0));
  out.ok = out.worst_ratio <= L * (1.0 + 1e-9);
  return out;
}

}  // namespace vi
