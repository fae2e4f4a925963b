#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "ompkit/errors.hpp"
#include "ompkit/omp_check.hpp"
#include "ompkit/omp_construct.hpp"
#include "ompkit/reference.hpp"
#include "support.hpp"

using namespace ompkit;

namespace {

struct Setup {
  Ensemble s;
  DiscriminationSolution sol;
  OmpSystem sys;
};

Setup setup(const Ensemble& s) {
  auto sol = solve_general(s);
  auto sys = build_system(s, sol);
  return {s, sol, sys};
}

double coeff(const Parametrization& p, const std::string& dep, const std::string& free) {
  for (std::size_t d = 0; d < p.dependent.size(); ++d) {
    if (unknown_name(p.dependent[d]) != dep) continue;
    if (free.empty()) return p.offset(static_cast<Eigen::Index>(d));
    for (std::size_t f = 0; f < p.free.size(); ++f) {
      if (unknown_name(p.free[f]) == free) {
        return p.coeffs(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(f));
      }
    }
    return 0.0;
  }
  FAIL("no dependent unknown " << dep);
  return 0.0;
}

}  // namespace

TEST_CASE("pack and unpack are inverse") {
  const QubitChannel c(Mat3::Random(), Vec3::Random());
  const auto u = unpack(pack(c, 0.125));
  CHECK(u.channel.D() == c.D());
  CHECK(u.channel.t() == c.t());
  CHECK(u.delta == 0.125);
  CHECK_THROWS_AS(unpack(RealVector::Zero(12)), WrongLength);
  CHECK(std::string(unknown_name(kDeltaSlot)) == "delta");
  CHECK(std::string(unknown_name(5)) == "d23");
  CHECK(std::string(unknown_name(99)) == "?");
}

TEST_CASE("the linear system encodes the per-pair OMP condition") {
  // For any (D, t, delta), row block i of Q x equals component i of
  // (D h_{a1 aj} + (q_a1 - q_aj) t - delta s_{a1 aj}).
  const auto [s, sol, sys] = setup(reference::unequal_priors());
  REQUIRE(sys.Q.rows() == 6);
  REQUIRE(sys.Q.cols() == 13);
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  const QubitChannel c(Mat3::NullaryExpr([&](Eigen::Index, Eigen::Index) { return g(rng); }),
                       Vec3(g(rng), g(rng), g(rng)));
  const double delta = g(rng);
  const RealVector Qx = sys.Q * pack(c, delta);
  for (Eigen::Index j = 0; j < 2; ++j) {
    const std::size_t aj = sys.index_set[static_cast<std::size_t>(j) + 1];
    const Vec3 expect = c.D() * helstrom(s, 0, aj).h_vec + (s.prior(0) - s.prior(aj)) * c.t() -
                        delta * (*sol.comp_states[0] - *sol.comp_states[aj]);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(Qx(i * 2 + j) == doctest::Approx(expect(i)));
  }
  // The identity channel with no loss is always a solution.
  CHECK((sys.Q * sys.b - sys.Q * pack(QubitChannel::identity(), 0.0)).norm() == 0.0);
}

TEST_CASE("worked examples: dimension of the OMP family") {
  // Nullities of Q quoted for the examples.
  const std::map<std::string, Eigen::Index> expect = {
      {"one-basis", 10}, {"bb84", 7}, {"three-mubs", 4}, {"sic", 4}, {"unequal-3", 7}};
  for (const auto& [name, s] : reference::all()) {
    CAPTURE(name);
    const auto [e, sol, sys] = setup(s);
    const auto fam = solve_family(sys);
    CHECK(fam.dim() == expect.at(name));
    CHECK(fam.dim() + numerical_rank(sys.Q) == 13);
    CHECK((sys.Q * fam.x_particular - sys.Q * sys.b).norm() < 1e-12);
    CHECK((sys.Q * fam.null_basis).norm() < 1e-12);
  }
}

TEST_CASE("BB84 helper vectors") {
  const auto [s, sol, sys] = setup(reference::bb84());
  // rows are s_1 - s_j, j = 2, 3, 4 with s_x = -v_x
  CHECK((sys.W.row(0).transpose() - Vec3(0, 0, -2)).norm() < 1e-8);
  CHECK((sys.W.row(1).transpose() - Vec3(1, 0, -1)).norm() < 1e-8);
  CHECK((sys.W.row(2).transpose() - Vec3(-1, 0, -1)).norm() < 1e-8);
  CHECK(sys.qdiff.isZero());
}

TEST_CASE("unital families of the symmetric examples are depolarizing") {
  const std::pair<Ensemble, double> cases[] = {{reference::three_mubs(), 6.0},
                                               {reference::sic(), 4.0}};
  for (const auto& [s, factor] : cases) {
    const auto [e, sol, sys] = setup(s);
    const auto fam = unital_family(sys);
    REQUIRE(fam.dim() == 1);
    for (double c : {-1.0, -0.3, 0.0, 0.7, 2.0}) {
      const auto u = unpack(fam.point(RealVector::Constant(1, c)));
      CHECK((u.channel.D() - (1.0 - factor * u.delta) * Mat3::Identity()).norm() < 1e-10);
      CHECK(u.channel.t().norm() < 1e-12);
    }
  }
}

TEST_CASE("fixing delta removes one dimension") {
  const auto [s, sol, sys] = setup(reference::bb84());
  const auto fam = solve_family(sys);
  const auto slice = delta_slice(fam, 0.1);
  CHECK(slice.dim() == fam.dim() - 1);
  CHECK(slice.x_particular(kDeltaSlot) == doctest::Approx(0.1));
  CHECK(slice.null_basis.row(kDeltaSlot).norm() < 1e-12);
  CHECK((sys.Q * slice.x_particular - sys.Q * sys.b).norm() < 1e-12);

  const auto line = delta_slice(unital_family(setup(reference::three_mubs()).sys), 0.05);
  CHECK(line.dim() == 0);
  CHECK_NOTHROW(delta_slice(line, 0.05));
  CHECK_THROWS_AS(delta_slice(line, 0.06), DeltaUnreachable);
  CHECK_THROWS_AS(fam.point(RealVector::Zero(2)), WrongLength);
}

TEST_CASE("parametrization reproduces every family member") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  for (const auto& [name, s] : reference::all()) {
    const auto [e, sol, sys] = setup(s);
    const auto fam = solve_family(sys);
    const auto p = parametrize(fam);
    REQUIRE(static_cast<Eigen::Index>(p.free.size()) == fam.dim());
    CHECK(p.free.front() == kDeltaSlot);
    for (int k = 0; k < 5; ++k) {
      RealVector c(fam.dim());
      for (auto& v : c) v = g(rng);
      const RealVector x = fam.point(c);
      RealVector xf(static_cast<Eigen::Index>(p.free.size()));
      for (std::size_t f = 0; f < p.free.size(); ++f) xf(static_cast<Eigen::Index>(f)) = x(p.free[f]);
      const RealVector xd = p.offset + p.coeffs * xf;
      for (std::size_t d = 0; d < p.dependent.size(); ++d) {
        CHECK(xd(static_cast<Eigen::Index>(d)) == doctest::Approx(x(p.dependent[d])).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("unequal-prior example: third column of D and t") {
  // Reference coefficients, three decimals.
  const auto [s, sol, sys] = setup(reference::unequal_priors());
  const auto p = parametrize(solve_family(sys));
  const std::vector<std::string> free_names = {"delta", "d11", "d12", "d21", "d22", "d31", "d32"};
  REQUIRE(p.free.size() == free_names.size());
  for (std::size_t f = 0; f < p.free.size(); ++f) CHECK(unknown_name(p.free[f]) == free_names[f]);

  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-3; };
  CHECK(near(coeff(p, "d13", ""), 1.707));
  CHECK(near(coeff(p, "d13", "d11"), -1.707));
  CHECK(near(coeff(p, "d13", "delta"), -7.075));
  CHECK(near(coeff(p, "d23", ""), 0.0));
  CHECK(near(coeff(p, "d23", "d21"), -1.707));
  CHECK(near(coeff(p, "d23", "delta"), 1.547));
  CHECK(near(coeff(p, "d33", ""), 1.0));
  CHECK(near(coeff(p, "d33", "d31"), -1.707));
  CHECK(near(coeff(p, "d33", "delta"), -4.145));
  CHECK(near(coeff(p, "t1", "d12"), -2.598));
  CHECK(near(coeff(p, "t1", "delta"), 1.808));
  CHECK(near(coeff(p, "t2", ""), 2.598));
  CHECK(near(coeff(p, "t2", "d22"), -2.598));
  CHECK(near(coeff(p, "t2", "delta"), -9.894));
  CHECK(near(coeff(p, "t3", "d32"), -2.598));
  CHECK(near(coeff(p, "t3", "delta"), 1.059));
}

TEST_CASE("sieve keeps only admissible channels and every kept channel is OMP") {
  const auto [s, sol, sys] = setup(reference::bb84());
  const auto fam = solve_family(sys);
  const auto res = sieve_admissible(fam, s, sol, {}, {400, 7, 0.5});
  CHECK(res.drawn == 400);
  CHECK(res.kept.size() + res.rejected_delta + res.rejected_cptp + res.rejected_check == 400);
  CHECK(res.rejected_check == 0);
  CHECK(res.kept.size() > 50);
  for (const auto& k : res.kept) {
    CHECK(is_admissible(pack(k.channel, k.delta), sol, {}));
    const auto rep = check_omp(s, sol, {}, k.channel);
    CHECK(rep.is_omp);
    CHECK(rep.delta == doctest::Approx(k.delta).epsilon(1e-9));
  }
  // same seed, same draws
  const auto again = sieve_admissible(fam, s, sol, {}, {400, 7, 0.5});
  REQUIRE(again.kept.size() == res.kept.size());
  CHECK(again.kept.back().coeffs == res.kept.back().coeffs);
  CHECK_THROWS_AS(sieve_admissible(fam, s, sol, {}, {0, 7, 0.5}), BadParameter);
  CHECK_THROWS_AS(sieve_admissible(fam, s, sol, {}, {10, 7, -1.0}), BadParameter);
}

TEST_CASE("build_system input errors") {
  const auto s = reference::bb84();
  const auto sol = solve_general(s);
  CHECK_THROWS_AS(build_system(s, sol, {1}), PairSetTooSmall);
  CHECK_THROWS_AS(build_system(s, sol, {1, 8}), IndexOutOfRange);
  const auto dom = Ensemble::validate({{0.7, Vec3(0, 0, 1)}, {0.3, Vec3(0, 0, 1)}});
  const auto dsol = solve_general(dom);
  CHECK_THROWS_AS(build_system(dom, dsol), PairSetTooSmall);
  CHECK_THROWS_AS(build_system(dom, dsol, {0, 1}), MissingComplementaryState);
}

TEST_CASE("scan_intervals finds the pieces of a union of intervals") {
  auto pred = [](double u) { return (u >= -0.5 && u <= 0.2) || (u >= 0.61 && u <= 0.9); };
  const auto iv = scan_intervals(pred, -1.0, 1.0, 400);
  REQUIRE(iv.size() == 2);
  CHECK(iv[0].first == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(iv[0].second == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(iv[1].first == doctest::Approx(0.61).epsilon(1e-12));
  CHECK(iv[1].second == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(scan_intervals([](double) { return true; }, 0, 1, 10) ==
        std::vector<std::pair<double, double>>{{0.0, 1.0}});
  CHECK(scan_intervals([](double) { return false; }, 0, 1, 10).empty());
  CHECK_THROWS_AS(scan_intervals(pred, 1, 0, 10), BadParameter);
}

TEST_CASE("CPTP interval of the depolarizing line") {
  // x0 + u dir = (1 - u) I, and lambda I is completely positive iff -1/3 <= lambda <= 1.
  const RealVector x0 = pack(QubitChannel::identity(), 0.0);
  const RealVector dir = pack(QubitChannel(-Mat3::Identity(), Vec3::Zero()), 0.0);
  const auto iv = cptp_intervals(x0, dir, -1.0, 3.0);
  REQUIRE(iv.size() == 1);
  // the Choi test accepts eigenvalues down to -1e-9
  CHECK(iv[0].first == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(iv[0].second == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
}
