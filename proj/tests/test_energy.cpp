#include "densepack/energy.hpp"
#include "densepack/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace densepack;

namespace {

Basis hexagonal(double m) {
  Eigen::Matrix2d B;
  B << m, 0.5 * m, 0.0, 0.5 * std::sqrt(3.0) * m;
  return Basis(B);
}

PeriodicEdge edge(int k, int j, Shift s, double gap) {
  PeriodicEdge e;
  e.k = k;
  e.j = j;
  e.shift = std::move(s);
  e.gap = gap;
  return e;
}

// Random spanning tree plus extra edges; weights in [0.5, 2], jumps in [-1, 1].
PotentialProblem random_problem(std::mt19937_64& rng, int n, int p) {
  std::uniform_real_distribution<double> w(0.5, 2.0), b(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  PotentialProblem P;
  P.n = n;
  P.p = p;
  auto add = [&](int k, int j) {
    P.k.push_back(k);
    P.j.push_back(j);
    P.w.push_back(w(rng));
    P.b.push_back(b(rng));
  };
  for (int v = 1; v < n; ++v) add(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  for (int e = 0; e < n; ++e) add(pick(rng), pick(rng));
  return P;
}

double objective(const PotentialProblem& P, const Eigen::VectorXd& t) {
  double f = 0.0;
  for (std::size_t e = 0; e < P.w.size(); ++e) f += P.w[e] * std::pow(std::abs(t(P.k[e]) - t(P.j[e]) - P.b[e]), P.p);
  return f;
}

}  // namespace

TEST_CASE("edge difference includes the wrap term") {
  const Basis B = Basis::identity(2, 2.0);
  PotentialField field{Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.3, 0.1), 1.0};
  CHECK(edge_difference(field, edge(0, 1, Shift{1, 0}, 0.1), B) == doctest::Approx(0.3 - 0.1 - 2.0));
  CHECK(edge_difference(field, edge(0, 1, Shift{0, 1}, 0.1), B) == doctest::Approx(0.2));
  field.amplitude = 0.5;
  CHECK(edge_jump(field, edge(0, 1, Shift{-1, 3}, 0.1), B) == doctest::Approx(-1.0));
}

TEST_CASE("unit direction") {
  CHECK(unit_direction(Eigen::Vector2d(3.0, 4.0)).isApprox(Eigen::Vector2d(0.6, 0.8)));
  CHECK_THROWS_AS(unit_direction(Eigen::Vector2d::Zero()), InvalidInput);
}

TEST_CASE("single self-edge: energy is w / V") {
  const FluxModel model(2, 2, 0.45);
  const Basis B = Basis::identity(2);
  const PeriodicGraph g(1, {edge(0, 0, Shift{1, 0}, 0.1)});
  const auto rep = minimize_potentials(g, model, Eigen::Vector2d(1.0, 0.0), B);
  CHECK(rep.sigma == doctest::Approx(g0_main(model, 0.1)).epsilon(1e-14));
  const PotentialField f{Eigen::Vector2d(1.0, 0.0), Eigen::VectorXd::Zero(1), 1.0};
  CHECK(energy(g, model, f, B) == doctest::Approx(rep.sigma).epsilon(1e-14));
}

TEST_CASE("square lattice under axis flux") {
  // Four neighbors per center, two of them along the flux.
  const FluxModel model(2, 2, 0.49);
  const Basis B = Basis::identity(2);
  const PeriodicGraph g(1, {edge(0, 0, Shift{0, 1}, 0.02), edge(0, 0, Shift{1, 0}, 0.02)});
  const auto rep = minimize_potentials(g, model, Eigen::Vector2d(1.0, 0.0), B);
  CHECK(rep.sigma == doctest::Approx(g0_main(model, 0.02)).epsilon(1e-14));
  CHECK(rep.per_edge[0] == 0.0);
  CHECK(rep.per_edge[1] == doctest::Approx(2.0 * g0_main(model, 0.02)));
}

TEST_CASE("zero gap gives infinite energy and a named error") {
  const FluxModel model(2, 2, 0.5);
  const Basis B = Basis::identity(2);
  const PeriodicGraph g(2, {edge(0, 1, Shift{0, 0}, 0.0), edge(0, 1, Shift{1, 0}, 0.1)});
  const PotentialField f{Eigen::Vector2d(1.0, 0.0), Eigen::VectorXd::Zero(2), 1.0};
  CHECK(std::isinf(energy(g, model, f, B)));
  CHECK_THROWS_WITH_AS(minimize_potentials(g, model, Eigen::Vector2d(1.0, 0.0), B),
                       doctest::Contains("balls 0 and 1"), InvalidInput);
}

TEST_CASE("field validation") {
  const FluxModel model(2, 2, 0.5);
  const PeriodicGraph g(1, {edge(0, 0, Shift{1, 0}, 0.1)});
  const Basis B = Basis::identity(2);
  CHECK_THROWS_AS(energy(g, model, {Eigen::Vector2d(1.0, 1.0), Eigen::VectorXd::Zero(1), 1.0}, B), InvalidInput);
  CHECK_THROWS_AS(energy(g, model, {Eigen::Vector3d(1.0, 0.0, 0.0), Eigen::VectorXd::Zero(1), 1.0}, B),
                  InvalidInput);
  CHECK_THROWS_AS(energy(g, model, {Eigen::Vector2d(1.0, 0.0), Eigen::VectorXd::Zero(2), 1.0}, B), InvalidInput);
}

TEST_CASE("hexagonal three-by-three cell with layer potentials, summed by hand") {
  // Centers (i, j) at i nu_1 + j nu_2 with nu_1 = (1,0), nu_2 = (1/2, sqrt3/2),
  // layers indexed by j. Flux normal to the layers with unit layer increments.
  const int m = 3;
  const double delta = 1e-3, r = 0.5 * (1.0 - delta);
  const FluxModel model(2, 2, r);
  const Basis B = hexagonal(m);
  std::vector<TorusPoint> centers;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) centers.push_back(TorusPoint{double(i) / m, double(j) / m});
  const Configuration cfg{B, centers, r};
  const auto g = build_delaunay(cfg);
  REQUIRE(g.edges().size() == 27u);
  const double h = std::sqrt(3.0) / 2.0;
  PotentialField f{Eigen::Vector2d(0.0, 1.0), Eigen::VectorXd(m * m), 1.0 / h};
  for (int k = 0; k < m * m; ++k) f.t(k) = (k / m) - 1.0;
  // Each center has two neighbors in the layer above and two below: 4 m^2
  // directed inter-layer pairs, each with unit drop.
  const double expected = 4.0 * m * m * g0_main(model, delta) / (2.0 * B.volume());
  CHECK(energy(g, model, f, B) == doctest::Approx(expected).epsilon(1e-10));
  const auto rep = minimize_potentials(g, model, f.xi, B, {}, f.amplitude);
  CHECK(rep.sigma == doctest::Approx(expected).epsilon(1e-10));
  for (int k = 0; k < m * m; ++k) CHECK(rep.t_opt(k) == doctest::Approx(f.t(k)).epsilon(1e-10));
}

TEST_CASE("linear solve and Newton agree on random problems") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto P = random_problem(rng, 2 + trial % 19, 2);
    const auto lin = solve_potentials(P, {1e-12, 500, PotentialMethod::linear});
    const auto nwt = solve_potentials(P, {1e-12, 500, PotentialMethod::newton});
    CHECK(nwt.objective == doctest::Approx(lin.objective).epsilon(1e-8));
    CHECK((lin.t - nwt.t).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(std::abs(lin.t.mean()) < 1e-12);
  }
}

TEST_CASE("p = 4 Newton against a grid search on three vertices") {
  PotentialProblem P;
  P.n = 3;
  P.p = 4;
  P.k = {0, 1, 2, 0};
  P.j = {1, 2, 0, 0};
  P.w = {1.0, 2.0, 0.7, 1.3};
  P.b = {0.4, -0.3, 0.8, 1.0};
  const auto sol = solve_potentials(P);
  const auto [x, y] = oracle::grid_min2(
      [&](double a, double b) {
        Eigen::Vector3d t(a, b, 0.0);
        return objective(P, t);
      },
      -3.0, 3.0);
  const Eigen::Vector3d t_grid = Eigen::Vector3d(x, y, 0.0).array() - (x + y) / 3.0;
  CHECK((sol.t - t_grid).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(sol.objective == doctest::Approx(objective(P, t_grid)).epsilon(1e-6));
}

TEST_CASE("minimum is a minimum: random perturbations never go lower") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int p : {2, 3, 4}) {
    const auto P = random_problem(rng, 8, p);
    const auto sol = solve_potentials(P);
    for (int s = 0; s < 50; ++s) {
      Eigen::VectorXd t = sol.t;
      for (int k = 0; k < P.n; ++k) t(k) += 1e-3 * z(rng);
      CHECK(objective(P, t) >= sol.objective * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("objective is invariant under constant shifts of t") {
  std::mt19937_64 rng(41);
  const auto P = random_problem(rng, 6, 3);
  const auto sol = solve_potentials(P);
  CHECK(objective(P, sol.t.array() + 5.0) == doctest::Approx(sol.objective).epsilon(1e-12));
}

TEST_CASE("objective scales linearly with the weights and as |b|^p with the jumps") {
  std::mt19937_64 rng(43);
  for (int p : {2, 4}) {
    auto P = random_problem(rng, 7, p);
    const double base = solve_potentials(P).objective;
    auto W = P;
    for (auto& w : W.w) w *= 3.0;
    CHECK(solve_potentials(W).objective == doctest::Approx(3.0 * base).epsilon(1e-8));
    auto S = P;
    for (auto& b : S.b) b *= 2.0;
    CHECK(solve_potentials(S).objective == doctest::Approx(std::pow(2.0, p) * base).epsilon(1e-8));
  }
}

TEST_CASE("convexity along segments") {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> z(0.0, 1.0);
  const auto P = random_problem(rng, 5, 4);
  for (int s = 0; s < 200; ++s) {
    Eigen::VectorXd a(5), b(5);
    for (int k = 0; k < 5; ++k) {
      a(k) = z(rng);
      b(k) = z(rng);
    }
    CHECK(objective(P, 0.5 * (a + b)) <= 0.5 * (objective(P, a) + objective(P, b)) + 1e-12);
  }
}

TEST_CASE("disconnected problems are gauged per component") {
  PotentialProblem P;
  P.n = 4;
  P.p = 2;
  P.k = {0, 2};
  P.j = {1, 3};
  P.w = {1.0, 1.0};
  P.b = {1.0, -2.0};
  const auto sol = solve_potentials(P);
  CHECK(sol.objective == doctest::Approx(0.0).scale(1.0));
  CHECK(sol.t(0) + sol.t(1) == doctest::Approx(0.0).scale(1.0));
  CHECK(sol.t(2) + sol.t(3) == doctest::Approx(0.0).scale(1.0));
  CHECK(sol.t(0) - sol.t(1) == doctest::Approx(1.0));
}

TEST_CASE("iteration limit raises a convergence error with the best iterate") {
  std::mt19937_64 rng(53);
  const auto P = random_problem(rng, 12, 6);
  try {
    solve_potentials(P, {1e-14, 1, PotentialMethod::newton});
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_iterate().size() == 12u);
  }
}

TEST_CASE("problem validation") {
  PotentialProblem P;
  P.n = 2;
  P.p = 3;
  P.k = {0};
  P.j = {1};
  P.w = {1.0};
  P.b = {0.5};
  CHECK_THROWS_AS(solve_potentials(P, {1e-10, 100, PotentialMethod::linear}), InvalidInput);
  P.w = {-1.0};
  CHECK_THROWS_AS(solve_potentials(P), InvalidInput);
  P.w = {1.0, 2.0};
  CHECK_THROWS_AS(solve_potentials(P), InvalidInput);
}
