#include "densepack/errors.hpp"
#include "densepack/torus.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace densepack;

namespace {

Basis hexagonal(double m) {
  Eigen::Matrix2d B;
  B << m, m * std::cos(M_PI / 3), 0.0, m * std::sin(M_PI / 3);
  return Basis(B);
}

TorusPoint random_point(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd f(d);
  for (int l = 0; l < d; ++l) f(l) = u(rng);
  return TorusPoint(f);
}

}  // namespace

TEST_CASE("minimal image across one face") {
  const auto r = torus_distance(Basis::identity(2), {0.1, 0.1}, {0.9, 0.1});
  CHECK(r.dist == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(r.shift == Shift{1, 0});
}

TEST_CASE("identical points are at distance zero") {
  const auto B = hexagonal(1.0);
  const auto r = torus_distance(B, {0.3, 0.7}, {0.3, 0.7});
  CHECK(r.dist == 0.0);
  CHECK(r.shift == Shift{0, 0});
}

TEST_CASE("hexagonal distance matches exhaustive images") {
  const auto B = hexagonal(1.0);
  const TorusPoint a{0.0, 0.0}, b{0.5, 0.5};
  const double expect = oracle::min_image(B.matrix(), a.frac(), b.frac(), 1);
  CHECK(torus_distance(B, a, b).dist == doctest::Approx(expect).epsilon(1e-15));
  CHECK(expect == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("cell volume") {
  CHECK(cell_volume(Basis::identity(3)) == doctest::Approx(1.0));
  CHECK(cell_volume(hexagonal(1.0)) == doctest::Approx(0.8660254037844386).epsilon(1e-15));
  const auto B = hexagonal(1.0);
  CHECK(cell_volume(B.scaled(2.5)) == doctest::Approx(std::pow(2.5, 2) * cell_volume(B)).epsilon(1e-14));
  Eigen::Matrix3d S;
  S << 1, 0.2, 0.1, 0, 1.1, 0.3, 0, 0, 0.9;
  CHECK(cell_volume(Basis(S).scaled(0.7)) == doctest::Approx(std::pow(0.7, 3) * std::abs(S.determinant())));
}

TEST_CASE("singular basis is rejected") {
  Eigen::Matrix2d B;
  B << 1, 2, 1, 2;
  CHECK_THROWS_AS(Basis{B}, InvalidInput);
}

TEST_CASE("strongly skewed basis is rejected") {
  Eigen::Matrix2d B;
  B << 1, 3.0, 0, 0.2;
  CHECK_THROWS_WITH_AS(Basis{B}, doctest::Contains("cell too skewed"), InvalidInput);
}

TEST_CASE("fractional coordinates are canonicalized") {
  const TorusPoint p{1.25, -0.25};
  CHECK(p.frac()(0) == doctest::Approx(0.25));
  CHECK(p.frac()(1) == doctest::Approx(0.75));
  const TorusPoint q{-1e-18, 0.0};
  CHECK(q.frac()(0) >= 0.0);
  CHECK(q.frac()(0) < 1.0);
}

TEST_CASE("symmetry, triangle inequality, translation invariance") {
  std::mt19937_64 rng(7);
  Eigen::Matrix3d S;
  S << 1.0, 0.3, -0.2, 0.0, 0.9, 0.25, 0.0, 0.0, 1.1;
  for (const Basis& B : {Basis::identity(2), hexagonal(1.3), Basis(S)}) {
    const int d = B.dim();
    for (int i = 0; i < 1000; ++i) {
      const auto a = random_point(rng, d), b = random_point(rng, d), c = random_point(rng, d);
      const auto ab = torus_distance(B, a, b), ba = torus_distance(B, b, a);
      REQUIRE(ab.dist == doctest::Approx(ba.dist).epsilon(1e-13));
      if (ab.shift != -ba.shift) {
        // Only ties may break the antisymmetry of the shift.
        Eigen::VectorXd f = a.frac() - b.frac();
        for (int l = 0; l < d; ++l) f(l) -= ba.shift[l];
        REQUIRE(B.to_cartesian(f).norm() == doctest::Approx(ab.dist).epsilon(1e-12));
      }
      REQUIRE(ab.dist <= torus_distance(B, a, c).dist + torus_distance(B, c, b).dist + 1e-12);
      const Eigen::VectorXd off = random_point(rng, d).frac();
      REQUIRE(torus_distance(B, a.translated(off), b.translated(off)).dist == doctest::Approx(ab.dist).epsilon(1e-12));
    }
  }
}

TEST_CASE("the +-1 window agrees with +-2 enumeration on accepted skewed bases") {
  std::mt19937_64 rng(11);
  Eigen::Matrix2d B2;
  B2 << 1.0, 0.5, 0.0, 0.9;
  Eigen::Matrix3d B3;
  B3 << 1.0, 0.45, 0.4, 0.0, 0.85, 0.35, 0.0, 0.0, 0.8;
  for (const Eigen::MatrixXd& M : {Eigen::MatrixXd(B2), Eigen::MatrixXd(B3)}) {
    const Basis B(M);
    for (int i = 0; i < 500; ++i) {
      const auto a = random_point(rng, B.dim()), b = random_point(rng, B.dim());
      REQUIRE(torus_distance(B, a, b).dist ==
              doctest::Approx(oracle::min_image(M, a.frac(), b.frac(), 2)).epsilon(1e-13));
    }
  }
}

TEST_CASE("shift arithmetic and enumeration") {
  CHECK(enumerate_shifts(2, 1).size() == 9);
  CHECK(enumerate_shifts(3, 2).size() == 125);
  CHECK(enumerate_shifts(2, 1).front() == Shift{-1, -1});
  CHECK(Shift{0, 1}.lex_positive());
  CHECK_FALSE(Shift{0, -1}.lex_positive());
  CHECK_FALSE(Shift{0, 0}.lex_positive());
  CHECK((Shift{1, -1} + Shift{0, 2}) == Shift{1, 1});
}

TEST_CASE("overlap check names the pair") {
  Configuration c{Basis::identity(2), {TorusPoint{0.0, 0.0}, TorusPoint{0.3, 0.0}}, 0.2};
  CHECK_THROWS_WITH_AS(check_non_overlapping(c), doctest::Contains("balls 0 and 1 overlap"), InvalidInput);
  c.radius = 0.15;
  CHECK_NOTHROW(check_non_overlapping(c));
  c.radius = 0.6;
  c.centers = {TorusPoint{0.0, 0.0}};
  CHECK_THROWS_WITH_AS(check_non_overlapping(c), doctest::Contains("own periodic images"), InvalidInput);
}

TEST_CASE("closest pair includes self images") {
  Configuration c{hexagonal(1.0), {TorusPoint{0.0, 0.0}}, 0.5};
  const auto cp = closest_pair(c);
  CHECK(cp.k == 0);
  CHECK(cp.j == 0);
  CHECK(cp.dist == doctest::Approx(1.0));
}
