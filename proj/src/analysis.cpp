#include "densepack/analysis.hpp"

#include "densepack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace densepack {

BoundReport lower_bound(const PeriodicGraph& graph, const FluxModel& model, const PotentialField& field,
                        const Basis& basis) {
  const auto f = edge_weight_function(model);
  const int p = model.p();
  const auto& edges = graph.edges();
  for (const auto& e : edges) {
    if (std::abs(e.length - 2.0 * model.r() - e.gap) > 1e-9 * (1.0 + e.length)) {
      throw InvalidInput("flux model radius does not match the radius behind the graph gaps");
    }
  }
  std::vector<double> drop(edges.size());
  double dmax = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    drop[e] = std::abs(edge_difference(field, edges[e], basis));
    dmax = std::max(dmax, drop[e]);
  }
  BoundReport rep;
  rep.energy = energy(graph, model, field, basis);
  if (dmax == 0.0) return rep;

  // Each stored edge stands for two directed pairs. The Hoelder argument is
  // formed relative to a reference support edge so that its distance to
  // contact keeps full relative precision.
  std::vector<std::size_t> supp;
  double T_s = 0.0, T_o = 0.0, S2p_o = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double q = std::pow(drop[e], p);
    if (drop[e] > 1e-6 * dmax) {
      supp.push_back(e);
      T_s += q;
    } else {
      T_o += q;
      S2p_o += q * q;
    }
  }
  const double N = static_cast<double>(supp.size());
  const double qbar = T_s / N;
  const double x0 = edges[supp.front()].length;
  const double g0 = edges[supp.front()].gap;
  double var = 0.0, su = 0.0, su2 = 0.0;
  double dlo = std::numeric_limits<double>::infinity(), dhi = 0.0;
  double glo = std::numeric_limits<double>::infinity(), ghi = -glo;
  for (std::size_t e : supp) {
    const double q = std::pow(drop[e], p);
    var += (q - qbar) * (q - qbar);
    const double u = edges[e].gap - g0;
    su += u;
    su2 += u * u;
    dlo = std::min(dlo, drop[e]);
    dhi = std::max(dhi, drop[e]);
    glo = std::min(glo, edges[e].gap);
    ghi = std::max(ghi, edges[e].gap);
  }
  const double T = T_s + T_o;
  // A = N S2p / T^2 and B = sum x^2 / (N x0^2); mean_arg = x0 sqrt(A B).
  const double a = (N * var + N * S2p_o - (2.0 * T_s * T_o + T_o * T_o)) / (T * T);
  const double b = (2.0 * x0 * su + su2) / (N * x0 * x0);
  const double rise = x0 * std::expm1(0.5 * (std::log1p(a) + std::log1p(b)));
  rep.defined = true;
  rep.T = 2.0 * T;
  rep.support_edges = static_cast<int>(supp.size());
  rep.mean_arg = x0 + rise;
  const double mean_gap = g0 + rise;
  rep.bound = mean_gap > 0.0 ? rep.T * model.c() * std::pow(mean_gap, -model.beta()) / (2.0 * basis.volume())
                             : f(rep.mean_arg) * rep.T / (2.0 * basis.volume());
  rep.equality_gap = rep.energy > 0.0 && std::isfinite(rep.energy) ? (rep.energy - rep.bound) / rep.energy : 0.0;
  const double gscale = std::max(std::abs(ghi), std::abs(glo));
  rep.equal_drop_edges_equal_gap = (dhi - dlo) <= 1e-9 * dhi && (ghi - glo) <= 1e-9 * gscale;
  return rep;
}

std::vector<TouchingEdge> touching_edges(const Configuration& config, double touch_tol) {
  const int n = config.size();
  const int d = config.dim();
  const double limit = touch_tol * config.radius;
  std::vector<TouchingEdge> out;
  const auto window = enumerate_shifts(d, 2);
  for (int k = 0; k < n; ++k) {
    for (int j = k; j < n; ++j) {
      const Eigen::VectorXd df =
          config.centers[static_cast<std::size_t>(j)].frac() - config.centers[static_cast<std::size_t>(k)].frac();
      for (const auto& m : window) {
        if (j == k && !m.lex_positive()) continue;
        Eigen::VectorXd mf(d);
        for (int l = 0; l < d; ++l) mf(l) = m[l];
        const double gap = config.basis.to_cartesian(df + mf).norm() - 2.0 * config.radius;
        if (gap <= limit) out.push_back({k, j, m, gap});
      }
    }
  }
  return out;
}

namespace {

// Union-find where each node stores its lift offset relative to its parent.
class OffsetUnionFind {
 public:
  OffsetUnionFind(int n, int d)
      : parent_(static_cast<std::size_t>(n)), off_(static_cast<std::size_t>(n), Eigen::VectorXi::Zero(d)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  // Root of v; off(v) becomes the offset of v relative to the root.
  int find(int v) {
    const auto i = static_cast<std::size_t>(v);
    if (parent_[i] == v) return v;
    const int p = parent_[i];
    const int root = find(p);
    off_[i] += off_[static_cast<std::size_t>(p)];
    parent_[i] = root;
    return root;
  }

  const Eigen::VectorXi& off(int v) const { return off_[static_cast<std::size_t>(v)]; }

  // Records that the copy of j in cell off(k) + m touches k. Returns the
  // winding vector if k and j were already joined, or an empty vector.
  Eigen::VectorXi unite(int k, int j, const Eigen::VectorXi& m) {
    const int rk = find(k);
    const int rj = find(j);
    if (rk == rj) return off(k) + m - off(j);
    off_[static_cast<std::size_t>(rj)] = off(k) + m - off(j);
    parent_[static_cast<std::size_t>(rj)] = rk;
    return Eigen::VectorXi();
  }

 private:
  std::vector<int> parent_;
  std::vector<Eigen::VectorXi> off_;
};

struct TouchingStructure {
  std::vector<int> component;
  int count = 0;
  std::vector<std::vector<Eigen::VectorXi>> windings;  ///< per component
  int edges = 0;
};

TouchingStructure touching_structure(const Configuration& config, double touch_tol) {
  const int n = config.size();
  const int d = config.dim();
  OffsetUnionFind uf(n, d);
  TouchingStructure ts;
  std::vector<std::pair<int, Eigen::VectorXi>> raw;
  const auto edges = touching_edges(config, touch_tol);
  ts.edges = static_cast<int>(edges.size());
  for (const auto& e : edges) {
    Eigen::VectorXi m(d);
    for (int l = 0; l < d; ++l) m(l) = e.shift[l];
    auto w = uf.unite(e.k, e.j, m);
    if (w.size() > 0 && !w.isZero()) raw.emplace_back(e.k, w);
  }
  ts.component.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> root_id(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    const int r = uf.find(v);
    if (root_id[static_cast<std::size_t>(r)] < 0) root_id[static_cast<std::size_t>(r)] = ts.count++;
    ts.component[static_cast<std::size_t>(v)] = root_id[static_cast<std::size_t>(r)];
  }
  ts.windings.resize(static_cast<std::size_t>(ts.count));
  for (auto& [v, w] : raw) ts.windings[static_cast<std::size_t>(ts.component[static_cast<std::size_t>(v)])].push_back(w);
  return ts;
}

int lattice_rank(const std::vector<Eigen::VectorXi>& ws, int d) {
  if (ws.empty()) return 0;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(ws.size()), d);
  for (std::size_t i = 0; i < ws.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = ws[i].cast<double>().transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

}  // namespace

PercolationReport detect_percolation(const Configuration& config, double touch_tol) {
  const int d = config.dim();
  const auto ts = touching_structure(config, touch_tol);
  PercolationReport rep;
  rep.winding.assign(static_cast<std::size_t>(d), false);
  rep.touching_edges = ts.edges;
  rep.component = ts.component;
  for (const auto& ws : ts.windings) {
    rep.component_rank.push_back(lattice_rank(ws, d));
    for (const auto& w : ws) {
      for (int l = 0; l < d; ++l) {
        if (w(l) != 0) rep.winding[static_cast<std::size_t>(l)] = true;
      }
    }
  }
  rep.isotropy_necessary = std::all_of(rep.winding.begin(), rep.winding.end(), [](bool b) { return b; });
  return rep;
}

std::vector<DensifyHint> densify_hint(const Configuration& config, double touch_tol) {
  const int n = config.size();
  const int d = config.dim();
  const auto ts = touching_structure(config, touch_tol);
  const double limit = touch_tol * config.radius;
  const auto window = enumerate_shifts(d, 2);
  std::vector<DensifyHint> out;
  for (int c = 0; c < ts.count; ++c) {
    if (lattice_rank(ts.windings[static_cast<std::size_t>(c)], d) == d) continue;
    DensifyHint h;
    h.component = c;
    for (int v = 0; v < n; ++v) {
      if (ts.component[static_cast<std::size_t>(v)] == c) h.members.push_back(v);
    }
    // With other components around, close the nearest gap to one of them;
    // otherwise the nearest non-touching image of the component itself.
    const bool alone = ts.count == 1;
    h.translation = std::numeric_limits<double>::infinity();
    for (int k : h.members) {
      for (int j = 0; j < n; ++j) {
        const bool other = ts.component[static_cast<std::size_t>(j)] != c;
        if (alone ? other : !other) continue;
        const Eigen::VectorXd df =
            config.centers[static_cast<std::size_t>(j)].frac() - config.centers[static_cast<std::size_t>(k)].frac();
        for (const auto& m : window) {
          if (j == k && m.is_zero()) continue;
          Eigen::VectorXd mf(d);
          for (int l = 0; l < d; ++l) mf(l) = m[l];
          const double gap = config.basis.to_cartesian(df + mf).norm() - 2.0 * config.radius;
          if (alone && gap <= limit) continue;
          if (gap < h.translation) {
            h.translation = gap;
            h.from = k;
            h.to = j;
          }
        }
      }
    }
    if (std::isfinite(h.translation)) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace densepack
