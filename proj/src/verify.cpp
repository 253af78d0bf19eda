#include "densepack/verify.hpp"

#include "densepack/analysis.hpp"
#include "densepack/errors.hpp"
#include "densepack/flux.hpp"
#include "densepack/lattices.hpp"
#include "densepack/optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace densepack {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

CheckResult check(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    return {name, ok, detail};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

LatticeData touching_minus(const LatticeSpec& spec, double delta) {
  auto lat = generate(spec);
  lat.config.radius = 0.5 - 0.5 * delta;
  lat.graph = with_geometry(lat.graph, lat.config);
  return lat;
}

}  // namespace

std::vector<CheckResult> run_verification() {
  std::vector<CheckResult> out;
  const int pairs[5][2] = {{2, 2}, {3, 2}, {2, 3}, {3, 4}, {5, 4}};

  out.push_back(check("flux: closed form vs quadrature", [&] {
    double worst = 0.0;
    for (const auto& dp : pairs) {
      const FluxModel m(dp[0], dp[1], 1.0);
      for (double delta : {1.0, 0.1, 0.01}) worst = std::max(worst, rel(g0_hypergeometric(m, delta), g0_quadrature(m, delta)));
    }
    return std::make_pair(worst <= 1e-8, fmt("max rel diff %.2e", worst));
  }));

  out.push_back(check("flux: main term dominates as gap -> 0", [&] {
    double lo = 1e300, hi = 0.0;
    for (const auto& dp : pairs) {
      const FluxModel m(dp[0], dp[1], 1.0);
      if (m.regime() != Regime::power) continue;
      const double q = g0_quadrature(m, 1e-8) / g0_main(m, 1e-8);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    const FluxModel lg(3, 2, 1.0);
    const double ql = g0_quadrature(lg, 1e-12) / g0_main(lg, 1e-12);
    const bool ok = lo >= 0.98 && hi <= 1.02 && ql >= 0.9 && ql <= 1.1;
    return std::make_pair(ok, fmt("power ratio in [%.4f, ", lo) + fmt("%.4f], ", hi) + fmt("log ratio %.4f", ql));
  }));

  out.push_back(check("flux: antiderivatives d=2,3 p=2", [&] {
    double worst = 0.0;
    for (double delta : {1.0, 0.1, 0.01, 1e-4}) {
      const double z = std::sqrt(1.0 / delta);
      worst = std::max(worst, rel(g0_quadrature(FluxModel(2, 2, 1.0), delta), 2.0 * z * std::atan(z)));
      worst = std::max(worst, rel(g0_quadrature(FluxModel(3, 2, 1.0), delta),
                                  std::numbers::pi * std::log((delta + 1.0) / delta)));
    }
    return std::make_pair(worst <= 1e-10, fmt("max rel diff %.2e", worst));
  }));

  out.push_back(check("flux: odd-d factorial form", [&] {
    double worst = 0.0;
    for (int d : {3, 5}) {
      for (int p = 3; p <= 8; ++p) {
        if (2 * p <= d + 1) continue;
        worst = std::max(worst, rel(reference::odd_d_constant(d, p, 1.0), FluxModel(d, p, 1.0).c()));
      }
    }
    return std::make_pair(worst <= 1e-12, fmt("max rel diff %.2e", worst));
  }));

  struct Case {
    const char* label;
    LatticeSpec spec;
  };
  const std::vector<Case> fixed = {{"A2 m=1", {Family::A2, 1, 2}}, {"A2 m=2", {Family::A2, 2, 2}},
                                   {"A2 m=3", {Family::A2, 3, 2}}, {"Z2 m=1", {Family::Z, 1, 2}},
                                   {"Z2 m=2", {Family::Z, 2, 2}},  {"FCC m=1", {Family::FCC, 1, 3}}};
  for (const auto& c : fixed) {
    out.push_back(check(std::string("fixed point: ") + c.label, [&] {
      const auto lat = generate(c.spec);
      const auto sol = solve_centers(lat.cls, lat.config.basis);
      return std::make_pair(sol.residual < 1e-12, fmt("residual %.2e", sol.residual));
    }));
  }

  const std::vector<std::pair<Case, double>> dens = {{{"A2", {Family::A2, 2, 2}}, std::numbers::pi / (2.0 * std::sqrt(3.0))},
                                                     {{"Z2", {Family::Z, 2, 2}}, std::numbers::pi / 4.0},
                                                     {{"FCC", {Family::FCC, 1, 3}}, std::numbers::pi / std::sqrt(18.0)},
                                                     {{"HCP", {Family::HCP, 1, 3}}, std::numbers::pi / std::sqrt(18.0)}};
  for (const auto& [c, expect] : dens) {
    out.push_back(check(std::string("density: ") + c.label, [&, expect = expect] {
      const auto lat = generate(c.spec);
      const auto rep = pack_in_class(lat.cls, lat.config.basis);
      const double err = std::abs(rep.density - expect);
      return std::make_pair(err <= 1e-12 && !rep.class_violation, fmt("density %.12f", rep.density));
    }));
  }

  out.push_back(check("layered potentials: A2 m=3, p=2", [&] {
    const LatticeSpec spec{Family::A2, 3, 2};
    const auto lat = touching_minus(spec, 1e-4);
    const auto layered = layered_potential(spec, lat.config);
    const auto rep = minimize_potentials(lat.graph, FluxModel(2, 2, lat.config.radius), layered.xi, lat.config.basis,
                                         {}, layered.amplitude);
    const double dev = (rep.t_opt - layered.t).cwiseAbs().maxCoeff();
    return std::make_pair(dev <= 1e-8, fmt("max deviation %.2e", dev));
  }));

  const std::vector<Case> lam = {{"A2 m=3", {Family::A2, 3, 2}}, {"Z2 m=2", {Family::Z, 2, 2}}, {"FCC m=1", {Family::FCC, 1, 3}}};
  for (const auto& c : lam) {
    out.push_back(check(std::string("bound equality: ") + c.label, [&] {
      const auto lat = touching_minus(c.spec, 1e-4);
      const int d = lat.config.dim();
      const FluxModel model(d, d + 1, lat.config.radius);
      const auto field = layered_potential(c.spec, lat.config);
      const auto br = lower_bound(lat.graph, model, field, lat.config.basis);
      return std::make_pair(br.defined && br.equality_gap <= 1e-9 && br.equality_gap >= -1e-12,
                            fmt("equality gap %.2e", br.equality_gap));
    }));
  }

  out.push_back(check("1-D chains are equally spaced", [&] {
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
      GraphClass cls{n, 1, std::vector<std::vector<ClassNeighbor>>(static_cast<std::size_t>(n))};
      for (int k = 0; k < n; ++k) {
        const int nx = (k + 1) % n;
        const int wrap = k + 1 == n ? 1 : 0;
        cls.adjacency[static_cast<std::size_t>(k)].push_back({nx, Shift{wrap}});
        cls.adjacency[static_cast<std::size_t>(nx)].push_back({k, Shift{-wrap}});
      }
      const auto X = solve_centers_symbolic(cls);
      for (int k = 0; k + 1 < n; ++k) worst = std::max(worst, std::abs(X(k + 1, 0) - X(k, 0) - 1.0 / n));
    }
    return std::make_pair(worst <= 1e-12, fmt("max spacing error %.2e", worst));
  }));

  out.push_back(check("percolation: hexagonal touching / shrunk", [&] {
    auto lat = generate({Family::A2, 2, 2});
    const auto touching = detect_percolation(lat.config);
    lat.config.radius *= 0.99;
    const auto shrunk = detect_percolation(lat.config);
    const bool ok = touching.winding == std::vector<bool>{true, true} && shrunk.winding == std::vector<bool>{false, false};
    return std::make_pair(ok, std::string("touching edges ") + std::to_string(touching.touching_edges) + " / " +
                                  std::to_string(shrunk.touching_edges));
  }));

  return out;
}

bool print_verification(const std::vector<CheckResult>& results, std::ostream& out) {
  int passed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
    passed += r.passed ? 1 : 0;
  }
  out << passed << "/" << results.size() << " checks passed\n";
  return passed == static_cast<int>(results.size());
}

}  // namespace densepack
