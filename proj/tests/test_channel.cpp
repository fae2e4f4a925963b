#include <doctest.h>

#include <cmath>
#include <random>

#include "ompkit/channel.hpp"
#include "ompkit/errors.hpp"
#include "support.hpp"

using namespace ompkit;
using testing::C2;
using testing::cd;

namespace {

using Kraus = std::vector<C2>;

C2 apply_kraus(const Kraus& ks, const C2& rho) {
  C2 out = C2::Zero();
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

Eigen::Matrix4cd choi_from_kraus(const Kraus& ks) {
  Eigen::Matrix4cd J = Eigen::Matrix4cd::Zero();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      C2 E = C2::Zero();
      E(r, c) = 1.0;
      J.block<2, 2>(2 * r, 2 * c) = apply_kraus(ks, E);
    }
  }
  return J;
}

Kraus amplitude_damping(double gamma) {
  C2 k0, k1;
  k0 << 1, 0, 0, std::sqrt(1 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return {k0, k1};
}

QubitChannel random_channel(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 D;
  Vec3 t;
  for (int i = 0; i < 9; ++i) D.data()[i] = u(rng);
  for (int i = 0; i < 3; ++i) t(i) = u(rng);
  return {D, t};
}

}  // namespace

TEST_CASE("amplitude damping in Bloch form matches its Kraus operators") {
  const double g = 0.3;
  const QubitChannel c(Eigen::Vector3d(std::sqrt(1 - g), std::sqrt(1 - g), 1 - g).asDiagonal(),
                       Vec3(0, 0, g));
  const Kraus ks = amplitude_damping(g);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const Vec3 v = testing::random_bloch(rng);
    const C2 expect = apply_kraus(ks, testing::density(v));
    CHECK((testing::density(c.apply(v)) - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK((c.choi_matrix() - choi_from_kraus(ks)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(is_cptp_choi(c) == CptpVerdict::kCptp);
}

TEST_CASE("unitary channels rotate the Bloch vector as U rho U^dagger") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int k = 0; k < 20; ++k) {
    const Vec3 n = testing::random_bloch(rng, true);
    const double th = ang(rng);
    const C2 U = std::cos(th / 2) * testing::pauli(0) -
                 cd(0, std::sin(th / 2)) * (n(0) * testing::pauli(1) + n(1) * testing::pauli(2) +
                                            n(2) * testing::pauli(3));
    const auto c = QubitChannel::unitary(n, th);
    CHECK((c.D() * c.D().transpose() - Mat3::Identity()).norm() < 1e-13);
    CHECK(c.D().determinant() == doctest::Approx(1.0));
    const Vec3 v = testing::random_bloch(rng);
    const C2 expect = U * testing::density(v) * U.adjoint();
    CHECK((testing::density(c.apply(v)) - expect).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((c.choi_matrix() - choi_from_kraus({U})).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK_THROWS_AS(QubitChannel::unitary(Vec3(1, 1, 0), 0.3), BadParameter);
  CHECK_THROWS_AS(QubitChannel::unitary(Vec3(0, 0, 1), NAN), BadParameter);
}

TEST_CASE("depolarizing channel") {
  const auto c = QubitChannel::depolarizing(0.25);
  CHECK(c.D().isApprox(0.75 * Mat3::Identity()));
  CHECK(c.t().isZero());
  CHECK(is_cptp_choi(c) == CptpVerdict::kCptp);
  CHECK_THROWS_AS(QubitChannel::depolarizing(-0.1), BadParameter);
  CHECK_THROWS_AS(QubitChannel::depolarizing(1.5), BadParameter);
  CHECK_THROWS_AS(QubitChannel::depolarizing(NAN), BadParameter);
}

TEST_CASE("apply rejects vectors outside the ball and acts affinely on operators") {
  const QubitChannel c(0.5 * Mat3::Identity(), Vec3(0.1, 0, 0));
  CHECK_THROWS_AS(c.apply(Vec3(2, 0, 0)), BlochOutOfBall);
  const Herm2 a{0.3, Vec3(0.1, -0.2, 0.05)};
  const Herm2 out = c.apply(a);
  CHECK(out.alpha == 0.3);  // trace preserving
  CHECK((out.beta - (0.5 * a.beta + 0.3 * Vec3(0.1, 0, 0))).norm() < 1e-15);
}

TEST_CASE("composition and mixtures") {
  std::mt19937_64 rng(23);
  const auto a = random_channel(rng, 0.4), b = random_channel(rng, 0.4);
  const Vec3 v = testing::random_bloch(rng) * 0.5;
  CHECK((a.compose(b).apply(v) - a.apply(b.apply(v))).norm() < 1e-14);
  const auto m = a.mix(b, 0.3);
  CHECK((m.apply(v) - (0.7 * a.apply(v) + 0.3 * b.apply(v))).norm() < 1e-14);
}

TEST_CASE("canonical form reconstructs D with proper rotations") {
  std::mt19937_64 rng(24);
  for (int k = 0; k < 200; ++k) {
    const auto c = random_channel(rng, 1.0);
    const auto f = c.canonical_form();
    CHECK((f.O1 * f.lambdas.asDiagonal() * f.O2 - c.D()).norm() < 1e-12);
    CHECK(f.O1.determinant() == doctest::Approx(1.0));
    CHECK(f.O2.determinant() == doctest::Approx(1.0));
    CHECK((f.O1 * f.O1.transpose() - Mat3::Identity()).norm() < 1e-12);
    CHECK(std::abs(f.lambdas(0)) <= std::abs(f.lambdas(1)) + 1e-14);
    CHECK(std::abs(f.lambdas(1)) <= f.lambdas(2) + 1e-14);
    CHECK((f.t_canon - f.O1.transpose() * c.t()).norm() < 1e-14);
  }
}

TEST_CASE("a Bloch-ball reflection is positive but not completely positive") {
  const QubitChannel flip(Eigen::Vector3d(1, 1, -1).asDiagonal(), Vec3::Zero());
  // unitarily equivalent to the transpose map, whose Choi operator is the swap
  CHECK(flip.choi_min_eigenvalue() == doctest::Approx(-1.0));
  CHECK(is_cptp_choi(flip) == CptpVerdict::kNotCp);
  CHECK(is_cptp_inequalities(flip.canonical_form()) == CptpVerdict::kNotCp);
  CHECK(is_cptp_choi(QubitChannel(Mat3::Identity() * NAN, Vec3::Zero())) == CptpVerdict::kNotCp);
}

TEST_CASE("inequality test is conclusive for on-axis shifts and never contradicts the Choi test") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int conclusive = 0;
  for (int k = 0; k < 3000; ++k) {
    // diagonal D with t along the last canonical axis
    const Vec3 l(u(rng), u(rng), u(rng));
    const QubitChannel c(l.asDiagonal(), Vec3(0, 0, 0.6 * u(rng)));
    const auto f = c.canonical_form();
    if (std::abs(f.t_canon(0)) > 1e-12 || std::abs(f.t_canon(1)) > 1e-12) continue;
    const auto v = is_cptp_inequalities(f);
    REQUIRE(v != CptpVerdict::kInconclusiveUseChoi);
    ++conclusive;
    CHECK(v == is_cptp_choi(c));
  }
  CHECK(conclusive > 500);
  for (int k = 0; k < 3000; ++k) {
    const auto c = random_channel(rng, 0.8);
    const auto v = is_cptp_inequalities(c.canonical_form());
    if (v != CptpVerdict::kInconclusiveUseChoi) CHECK(v == is_cptp_choi(c));
  }
}

TEST_CASE("verdict names") {
  CHECK(std::string(to_string(CptpVerdict::kCptp)) == "CPTP");
  CHECK(std::string(to_string(CptpVerdict::kInconclusiveUseChoi)) == "INCONCLUSIVE_USE_CHOI");
}
