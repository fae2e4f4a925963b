#include <doctest.h>

#include <random>

#include "ompkit/bloch.hpp"
#include "ompkit/errors.hpp"
#include "support.hpp"

using namespace ompkit;
using testing::as_matrix;
using testing::C2;

TEST_CASE("Herm2 round-trips through its 2x2 matrix") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    const Herm2 a{g(rng), Vec3(g(rng), g(rng), g(rng))};
    const C2 m = a.to_matrix();
    CHECK((m - as_matrix(a)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(Herm2::from_matrix(m).max_abs_diff(a) < 1e-14);
  }
}

TEST_CASE("trace, eigenvalues and trace norm agree with the matrix") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    const Herm2 a{g(rng), Vec3(g(rng), g(rng), g(rng))};
    const Herm2 b{g(rng), Vec3(g(rng), g(rng), g(rng))};
    const Eigen::Vector2d ev = testing::eigenvalues(as_matrix(a));
    CHECK(a.trace() == doctest::Approx(as_matrix(a).trace().real()).epsilon(1e-13));
    CHECK(a.lo() == doctest::Approx(ev(0)).epsilon(1e-12));
    CHECK(a.hi() == doctest::Approx(ev(1)).epsilon(1e-12));
    CHECK(trace_norm(a) == doctest::Approx(ev.cwiseAbs().sum()).epsilon(1e-12));
    CHECK(trace_product(a, b) ==
          doctest::Approx((as_matrix(a) * as_matrix(b)).trace().real()).epsilon(1e-12));

    // the reported axis is the eigenvector of the larger eigenvalue
    const auto e = eigen2(a);
    const C2 proj = 0.5 * (testing::pauli(0) + e.axis(0) * testing::pauli(1) +
                           e.axis(1) * testing::pauli(2) + e.axis(2) * testing::pauli(3));
    CHECK(((as_matrix(a) * proj) - e.hi * proj).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("eigen2 of a multiple of the identity uses the z axis") {
  const auto e = eigen2(Herm2{0.3, Vec3::Zero()});
  CHECK(e.lo == 0.3);
  CHECK(e.hi == 0.3);
  CHECK(e.axis == Vec3::UnitZ());
}

TEST_CASE("states are validated against the Bloch ball") {
  CHECK(herm2_from_state(Vec3(0, 0, 1)).max_abs_diff(Herm2{0.5, Vec3(0, 0, 0.5)}) == 0.0);
  CHECK_NOTHROW(herm2_from_state(Vec3(0, 0, 1.0 + 1e-10)));
  CHECK_THROWS_AS(herm2_from_state(Vec3(0, 0.8, 0.8)), BlochOutOfBall);
  CHECK_THROWS_AS(herm2_from_state(Vec3(0, 0, NAN)), BlochOutOfBall);
}

TEST_CASE("tolerances must be positive") {
  CHECK_NOTHROW(Tolerances{}.validate());
  CHECK_THROWS_AS((Tolerances{0.0, 1e-9, 1e-8}.validate()), BadParameter);
  CHECK_THROWS_AS((Tolerances{1e-9, -1.0, 1e-8}.validate()), BadParameter);
}

TEST_CASE("pinv satisfies the Moore-Penrose conditions on a rank-deficient matrix") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  RealMatrix L(6, 3), R(3, 5);
  for (Eigen::Index i = 0; i < L.size(); ++i) L.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < R.size(); ++i) R.data()[i] = g(rng);
  const RealMatrix A = L * R;  // 6x5, rank 3
  const RealMatrix P = pinv(A);
  CHECK(numerical_rank(A) == 3);
  CHECK((A * P * A - A).norm() < 1e-10);
  CHECK((P * A * P - P).norm() < 1e-10);
  CHECK(((A * P).transpose() - A * P).norm() < 1e-10);
  CHECK(((P * A).transpose() - P * A).norm() < 1e-10);

  const RealMatrix N = nullspace(A);
  REQUIRE(N.cols() == 2);
  CHECK((A * N).norm() < 1e-10);
  CHECK((N.transpose() * N - RealMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("empty matrices have rank zero and a full null space") {
  CHECK(numerical_rank(RealMatrix(0, 4)) == 0);
  CHECK(nullspace(RealMatrix(0, 4)).isApprox(RealMatrix::Identity(4, 4)));
  CHECK(pinv(RealMatrix::Zero(2, 3)).isZero());
}
