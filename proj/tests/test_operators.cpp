#include <hybridvi/operators.hpp>
#include <hybridvi/rng.hpp>

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace vi;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("apply evaluates Mx + q and tallies") {
  AffineOperator op{Matrix::Identity(2, 2), vec2(-2.0, 1.0)};
  std::int64_t tally = 0;
  const Vector y = apply(op, vec2(3.0, 3.0), &tally);
  CHECK(y == vec2(1.0, 4.0));
  CHECK(tally == 1);
  apply(op, vec2(0.0, 0.0), &tally);
  CHECK(tally == 2);
  apply(op, vec2(0.0, 0.0));  // no tally pointer, no crash
  CHECK(tally == 2);
  CHECK_THROWS_AS(apply(op, Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("spectral_norm on matrices with known norms") {
  CHECK(spectral_norm(Matrix::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(spectral_norm(mat2(3.0, 0.0, 0.0, 1.0)) == doctest::Approx(3.0).epsilon(1e-9));
  // rotation-like skew matrix: both singular values equal 2
  CHECK(spectral_norm(mat2(0.0, -2.0, 2.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(spectral_norm(Matrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("spectral_norm upper-bounds the true norm within its inflation") {
  Rng rng(271828);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 7;
    Matrix M(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) M(i, j) = rng.uniform(-5.0, 5.0);
    const double est = spectral_norm(M);
    const double ref = Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
    CHECK(est >= ref * (1.0 - 1e-10));   // never an underestimate beyond roundoff
    CHECK(est <= ref * (1.0 + 1e-8));    // inflation stays tiny
  }
}

TEST_CASE("monotonicity sampling accepts monotone and flags non-monotone operators") {
  AffineOperator identity{Matrix::Identity(3, 3), Vector::Zero(3)};
  auto mc = check_monotone_sample(identity, 200, 7);
  CHECK(mc.ok);
  CHECK(mc.worst == doctest::Approx(1.0).epsilon(1e-9));

  // skew part contributes nothing to <Mx - My, x - y>
  AffineOperator skew{mat2(0.0, -2.0, 2.0, 0.0), Vector::Zero(2)};
  auto sc = check_monotone_sample(skew, 200, 7);
  CHECK(sc.ok);
  CHECK(std::abs(sc.worst) <= 1e-9);

  AffineOperator neg{-Matrix::Identity(2, 2), Vector::Zero(2)};
  auto nc = check_monotone_sample(neg, 200, 7);
  CHECK(!nc.ok);
  CHECK(nc.worst == doctest::Approx(-1.0).epsilon(1e-9));
  // the witness pair reproduces the reported ratio
  const Vector dx = nc.x - nc.y;
  const double ratio = (apply(neg, nc.x) - apply(neg, nc.y)).dot(dx) / dx.squaredNorm();
  CHECK(ratio == doctest::Approx(nc.worst).epsilon(1e-12));
}

TEST_CASE("Lipschitz sampling catches an understated constant on a diagonal operator") {
  AffineOperator op{mat2(3.0, 0.0, 0.0, 1.0), Vector::Zero(2)};
  auto ok = check_lipschitz_sample(op, 3.0, 100, 3);
  CHECK(ok.ok);
  CHECK(ok.worst_ratio == doctest::Approx(3.0).epsilon(1e-9));

  // Random pairs mix the coordinates, so hitting the full gain of a diagonal
  // operator needs the axis-aligned probes; those run first.
  auto bad = check_lipschitz_sample(op, 2.9, 100, 3);
  CHECK(!bad.ok);
  CHECK(bad.worst_ratio >= 3.0 - 1e-9);
  const Vector dx = bad.x - bad.y;
  CHECK((apply(op, bad.x) - apply(op, bad.y)).norm() / dx.norm() ==
        doctest::Approx(bad.worst_ratio).epsilon(1e-12));
}

TEST_CASE("Lipschitz sampling accepts the measured spectral norm on random operators") {
  Rng rng(1618);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 5;
    Matrix M(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) M(i, j) = rng.uniform(-5.0, 5.0);
    AffineOperator op{M, rng.uniform_vector(dim, -1.0, 1.0)};
    const double L = spectral_norm(M);
    auto lc = check_lipschitz_sample(op, L, 100, 1000 + static_cast<std::uint64_t>(trial));
    CHECK(lc.ok);
    CHECK(lc.worst_ratio <= L * (1.0 + 1e-9));
  }
}
