// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "densepack/analysis.hpp"
#include "densepack/energy.hpp"
#include "densepack/flux.hpp"
#include "densepack/lattices.hpp"
#include "densepack/optimizer.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace densepack;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "first failure: " << what;
      ok = false;
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Basis hexagonal(double m) {
  Eigen::Matrix2d B;
  B << m, 0.5 * m, 0.0, 0.5 * std::sqrt(3.0) * m;
  return Basis(B);
}

Basis diag(std::vector<double> s) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return Basis(Eigen::MatrixXd(v.asDiagonal()));
}

std::vector<Eigen::VectorXd> fracs(const Configuration& c) {
  std::vector<Eigen::VectorXd> f;
  for (const auto& p : c.centers) f.push_back(p.frac());
  return f;
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Configuration random_config(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Basis B = Basis::identity(2);
  std::vector<TorusPoint> c;
  while (static_cast<int>(c.size()) < n) {
    TorusPoint p{u(rng), u(rng)};
    bool ok = true;
    for (const auto& q : c) ok = ok && torus_distance(B, p, q).dist > 0.02;
    if (ok) c.push_back(p);
  }
  Configuration cfg{B, c, 0.0};
  cfg.radius = 0.45 * closest_pair(cfg).dist;
  return cfg;
}

Outcome flux_oracles() {
  Outcome o;
  for (auto [d, p] : std::array<std::pair<int, int>, 5>{{{2, 2}, {3, 2}, {2, 3}, {3, 4}, {5, 4}}}) {
    const FluxModel m(d, p, 1.0);
    for (double delta : {1.0, 0.1, 0.01}) {
      const double h = g0_hypergeometric(m, delta), q = g0_quadrature(m, delta);
      o.expect(rel(h, q) <= 1e-8, "hyp vs quad d=" + std::to_string(d) + " p=" + std::to_string(p));
    }
    if (m.regime() == Regime::power) {
      const double ratio = g0_quadrature(m, 1e-8) / g0_main(m, 1e-8);
      o.expect(ratio >= 0.98 && ratio <= 1.02, "main-term ratio " + str(ratio));
    } else {
      const double ratio = g0_quadrature(m, 1e-12) / g0_main(m, 1e-12);
      o.expect(ratio >= 0.9 && ratio <= 1.1, "logarithmic ratio " + str(ratio));
    }
  }
  return o;
}

Outcome closed_antiderivatives() {
  Outcome o;
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    for (double delta : {1.0, 0.1, 1e-3, 1e-6}) {
      const double s = std::sqrt(r / delta);
      const double e2 = 2.0 * s * std::atan(s);
      const double e3 = M_PI * r * std::log((delta + r) / delta);
      const double a = rel(g0_quadrature(FluxModel(2, 2, r), delta), e2);
      const double b = rel(g0_quadrature(FluxModel(3, 2, r), delta), e3);
      worst = std::max({worst, a, b});
    }
  }
  o.expect(worst <= 1e-10, "worst relative error " + str(worst));
  o.note << (o.ok ? "worst rel " + str(worst) : "");
  return o;
}

Outcome odd_d_reduction() {
  Outcome o;
  for (int d : {3, 5}) {
    for (int p = 3; p <= 8; ++p) {
      if (2 * p <= d + 1) continue;
      o.expect(rel(reference::odd_d_constant(d, p, 1.0), FluxModel(d, p, 1.0).c()) <= 1e-12,
               "odd-d d=" + std::to_string(d) + " p=" + std::to_string(p));
    }
  }
  if (o.ok) {
    o.note << "even-d/canonical at d=2:";
    for (int p = 3; p <= 6; ++p) o.note << " p=" << p << ":" << str(reference::even_d_constant(2, p, 1.0) / FluxModel(2, p, 1.0).c());
    o.note << "; planar/canonical p=3: " << str(reference::planar_nonlinear_constant(3, 1.0) / FluxModel(2, 3, 1.0).c());
  }
  return o;
}

Outcome fixed_points() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (const LatticeSpec s : {LatticeSpec{Family::A2, 1, 2}, LatticeSpec{Family::A2, 2, 2}, LatticeSpec{Family::A2, 3, 2},
                              LatticeSpec{Family::Z, 1, 2}, LatticeSpec{Family::Z, 2, 2}, LatticeSpec{Family::FCC, 1, 3}}) {
    const auto L = generate(s);
    const std::string name = to_string(s.family) + " m=" + std::to_string(s.m);
    const auto sol = solve_centers(L.cls, L.config.basis);
    o.expect(sol.residual < 1e-12, name + " residual " + str(sol.residual));
    Eigen::MatrixXd lattice(L.config.size(), L.config.dim());
    for (int k = 0; k < L.config.size(); ++k) lattice.row(k) = L.config.centers[static_cast<std::size_t>(k)].frac();
    Eigen::MatrixXd start = lattice;
    for (Eigen::Index i = 0; i < start.size(); ++i) start.data()[i] += u(rng) / s.m;
    const Eigen::MatrixXd back = relax_centers(L.cls, start);
    Eigen::MatrixXd da = back.rowwise() - back.colwise().mean();
    Eigen::MatrixXd db = lattice.rowwise() - lattice.colwise().mean();
    double dev = 0.0;
    for (int k = 0; k < L.config.size(); ++k) {
      dev = std::max(dev, (L.config.basis.matrix() * (da.row(k) - db.row(k)).transpose()).norm());
    }
    o.expect(dev < 1e-8, name + " jitter deviation " + str(dev));
  }
  return o;
}

Outcome densities() {
  Outcome o;
  const auto a2 = generate({Family::A2, 2, 2});
  const auto z2 = generate({Family::Z, 2, 2});
  const auto fcc = generate({Family::FCC, 1, 3});
  const double da = pack_in_class(a2.cls, a2.config.basis).density;
  const double dz = pack_in_class(z2.cls, z2.config.basis).density;
  const double df = pack_in_class(fcc.cls, fcc.config.basis).density;
  o.expect(std::abs(da - M_PI / (2.0 * std::sqrt(3.0))) <= 1e-12, "A2 " + str(da));
  o.expect(std::abs(dz - M_PI / 4.0) <= 1e-12, "Z2 " + str(dz));
  o.expect(std::abs(df - M_PI / std::sqrt(18.0)) <= 1e-12, "fcc " + str(df));
  return o;
}

Outcome layered_potentials() {
  Outcome o;
  const LatticeSpec s{Family::A2, 3, 2};
  auto L = generate(s);
  L.config.radius = 0.5 * (1.0 - 1e-3);
  const auto graph = with_geometry(L.graph, L.config);
  const auto field = layered_potential(s, L.config);
  const auto rep = minimize_potentials(graph, FluxModel(2, 2, L.config.radius), field.xi, L.config.basis, {}, field.amplitude);
  // Layer index from the second fractional coordinate.
  double dev = 0.0;
  for (int k = 0; k < L.config.size(); ++k) {
    const double layer = std::round(L.config.centers[static_cast<std::size_t>(k)].frac()(1) * s.m);
    dev = std::max(dev, std::abs(rep.t_opt(k) - rep.t_opt(0) - (layer - std::round(L.config.centers[0].frac()(1) * s.m))));
  }
  o.expect(dev <= 1e-8, "max deviation " + str(dev));
  return o;
}

Outcome bound_equality() {
  Outcome o;
  for (const LatticeSpec s : {LatticeSpec{Family::A2, 3, 2}, LatticeSpec{Family::Z, 2, 2}, LatticeSpec{Family::FCC, 1, 3}}) {
    auto L = generate(s);
    L.config.radius = 0.5 * (1.0 - 1e-4);
    const auto graph = with_geometry(L.graph, L.config);
    const auto field = layered_potential(s, L.config);
    const auto rep = lower_bound(graph, FluxModel(L.config.dim(), L.config.dim() + 1, L.config.radius), field, L.config.basis);
    o.expect(rep.defined && std::abs(rep.equality_gap) <= 1e-9,
             to_string(s.family) + " equality gap " + str(rep.equality_gap));
  }
  // Move one center by 0.05, keep the smallest gap at 1e-4.
  const LatticeSpec s{Family::A2, 3, 2};
  auto L = generate(s);
  const Eigen::Vector2d move(0.05, 0.0);
  L.config.centers[4] = L.config.centers[4].translated(L.config.basis.to_fractional(move));
  L.config.radius = 0.5 * (closest_pair(L.config).dist - 1e-4);
  const auto graph = build_delaunay(L.config);
  const FluxModel model(2, 3, L.config.radius);
  const auto field = layered_potential(s, generate(s).config);
  const auto rep = minimize_potentials(graph, model, field.xi, L.config.basis, {}, field.amplitude);
  const auto br = lower_bound(graph, model, {field.xi, rep.t_opt, field.amplitude}, L.config.basis);
  o.expect(br.defined && br.energy - br.bound > 0.0, "perturbed margin " + str(br.energy - br.bound));
  if (o.ok) o.note << "perturbed relative margin " << str(br.equality_gap);
  return o;
}

Outcome solver_cross_validation() {
  Outcome o;
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cfg = random_config(rng, 2 + trial % 19);
    const auto graph = build_delaunay(cfg);
    if (graph.component_count() != 1) {
      o.expect(false, "random graph disconnected");
      continue;
    }
    const FluxModel model(2, 2, cfg.radius);
    const Eigen::Vector2d xi = unit_direction(Eigen::Vector2d(std::cos(trial), std::sin(trial)));
    const auto lin = minimize_potentials(graph, model, xi, cfg.basis, {1e-12, 500, PotentialMethod::linear});
    const auto nwt = minimize_potentials(graph, model, xi, cfg.basis, {1e-12, 500, PotentialMethod::newton});
    o.expect(rel(nwt.sigma, lin.sigma) <= 1e-8, "p=2 trial " + std::to_string(trial));
  }
  PotentialProblem P;
  P.n = 3;
  P.p = 4;
  P.k = {0, 1, 2, 0, 1};
  P.j = {1, 2, 0, 0, 0};
  P.w = {1.0, 2.5, 0.7, 1.3, 0.4};
  P.b = {0.4, -0.3, 0.8, 1.0, -0.6};
  const auto sol = solve_potentials(P);
  auto obj = [&](const Eigen::Vector3d& t) {
    double f = 0.0;
    for (std::size_t e = 0; e < P.w.size(); ++e) f += P.w[e] * std::pow(std::abs(t(P.k[e]) - t(P.j[e]) - P.b[e]), 4);
    return f;
  };
  const auto [x, y] = oracle::grid_min2([&](double a, double b) { return obj(Eigen::Vector3d(a, b, 0.0)); }, -3.0, 3.0);
  const Eigen::Vector3d tg = Eigen::Vector3d(x, y, 0.0).array() - (x + y) / 3.0;
  o.expect((sol.t - tg).cwiseAbs().maxCoeff() <= 1e-6, "p=4 potentials vs grid");
  o.expect(rel(sol.objective, obj(tg)) <= 1e-6, "p=4 objective vs grid");
  return o;
}

Outcome nullspace() {
  Outcome o;
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cls = class_from_graph(build_delaunay(random_config(rng, 2 + trial % 15)));
    const Eigen::MatrixXd L = class_laplacian(cls);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
    o.expect(lu.rank() == cls.n - 1, "rank on trial " + std::to_string(trial));
    const Eigen::MatrixXd ker = lu.kernel();
    o.expect(ker.cols() == 1 && (ker.col(0).array() - ker(0, 0)).abs().maxCoeff() < 1e-12 * ker.col(0).norm(),
             "constant kernel on trial " + std::to_string(trial));
  }
  return o;
}

Outcome percolation() {
  Outcome o;
  Eigen::Matrix2d skew;
  skew << 2.0, 1.0, 0.0, 1.0;
  const std::vector<std::pair<Configuration, std::vector<bool>>> cases = {
      {{Basis::identity(2), {TorusPoint{0.3, 0.3}}, 0.5}, {true, true}},
      {{diag({1.0, 2.0}), {TorusPoint{0.0, 0.0}}, 0.5}, {true, false}},
      {{hexagonal(1.0), {TorusPoint{0.0, 0.0}}, 0.5}, {true, true}},
      {{Basis::identity(2, 2.0), {TorusPoint{0.1, 0.1}, TorusPoint{0.35, 0.1}}, 0.25}, {false, false}},
      {{Basis::identity(2, 2.0), {TorusPoint{0.0, 0.5}, TorusPoint{0.25, 0.5}, TorusPoint{0.5, 0.5}, TorusPoint{0.75, 0.5}}, 0.25},
       {true, false}},
      {{Basis::identity(2), {TorusPoint{0.0, 0.0}, TorusPoint{0.5, 0.5}}, std::sqrt(0.5) / 2.0}, {true, true}},
      {{Basis(skew), {TorusPoint{0.0, 0.0}}, std::sqrt(0.5)}, {true, true}},
      {{Basis::identity(3), {TorusPoint{0.5, 0.5, 0.5}}, 0.5}, {true, true, true}},
      {{diag({1.0, 1.0, 1.5}), {TorusPoint{0.0, 0.0, 0.0}}, 0.5}, {true, true, false}},
      {{diag({3.0, 3.0}),
        {TorusPoint{0.0, 0.1}, TorusPoint{1.0 / 3.0, 0.1}, TorusPoint{2.0 / 3.0, 0.1}, TorusPoint{0.0, 0.6},
         TorusPoint{1.0 / 3.0, 0.6}, TorusPoint{2.0 / 3.0, 0.6}},
        0.5},
       {true, false}},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [cfg, expected] = cases[i];
    const auto w = detect_percolation(cfg).winding;
    const auto ref = oracle::lifted_winding(cfg.basis.matrix(), fracs(cfg), cfg.radius, 1e-8, 3);
    o.expect(w == expected && ref == expected, "case " + std::to_string(i));
  }
  Configuration hex{hexagonal(1.0), {TorusPoint{0.0, 0.0}}, 0.5};
  o.expect(detect_percolation(hex).winding == std::vector<bool>{true, true}, "hexagonal at touching");
  hex.radius = 0.5 * 0.99;
  o.expect(detect_percolation(hex).winding == std::vector<bool>{false, false}, "hexagonal shrunk by 1%");
  return o;
}

Outcome one_dimensional() {
  Outcome o;
  for (int n = 2; n <= 8; ++n) {
    const auto L = generate({Family::Z, n, 1});
    const auto sol = solve_centers(L.cls, L.config.basis);
    std::vector<double> x;
    for (int k = 0; k < n; ++k) x.push_back(sol.centers[static_cast<std::size_t>(k)].frac()(0));
    std::sort(x.begin(), x.end());
    x.push_back(x.front() + 1.0);
    for (int k = 0; k < n; ++k) {
      o.expect(std::abs((x[static_cast<std::size_t>(k) + 1] - x[static_cast<std::size_t>(k)]) * n - 1.0) <= 1e-12,
               "n=" + std::to_string(n));
    }
  }
  return o;
}

std::pair<int, std::string> capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, out};
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {status, out};
}

Outcome determinism() {
  Outcome o;
  const std::string cmd = std::string("\"") + DENSEPACK_CLI_PATH + "\" verify 2>&1";
  const auto a = capture(cmd);
  const auto b = capture(cmd);
  o.expect(a.first == 0 && b.first == 0, "verify exit status");
  o.expect(!a.second.empty() && a.second == b.second, "outputs differ");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"flux oracle agreement", flux_oracles},
      {"closed antiderivatives", closed_antiderivatives},
      {"odd-d reduction", odd_d_reduction},
      {"lattice fixed points", fixed_points},
      {"densities", densities},
      {"layered potentials", layered_potentials},
      {"bound equality", bound_equality},
      {"solver cross-validation", solver_cross_validation},
      {"nullspace and rank", nullspace},
      {"percolation", percolation},
      {"one-dimensional spacing", one_dimensional},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << "exception: " << e.what();
    }
    failed += !o.ok;
    std::cout << (o.ok ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << criteria[i].first;
    const std::string note = o.note.str();
    if (!note.empty()) std::cout << "  (" << note << ")";
    std::cout << "\n";
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
