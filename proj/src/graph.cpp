#include "densepack/graph.hpp"

#include "densepack/errors.hpp"
#include "densepack/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace densepack {

PeriodicGraph::PeriodicGraph(int n, std::vector<PeriodicEdge> edges)
    : n_(n), edges_(std::move(edges)), degrees_(static_cast<std::size_t>(n), 0),
      incident_(static_cast<std::size_t>(n)) {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    if (ed.k < 0 || ed.k >= n || ed.j < 0 || ed.j >= n) {
      throw InvalidInput("edge " + std::to_string(e) + " references a vertex outside [0, n)");
    }
    if (ed.is_self() && ed.shift.is_zero()) throw InvalidInput("self-edge with zero shift");
    if (ed.is_self()) {
      degrees_[static_cast<std::size_t>(ed.k)] += 2;
      incident_[static_cast<std::size_t>(ed.k)].push_back(static_cast<int>(e));
    } else {
      ++degrees_[static_cast<std::size_t>(ed.k)];
      ++degrees_[static_cast<std::size_t>(ed.j)];
      incident_[static_cast<std::size_t>(ed.k)].push_back(static_cast<int>(e));
      incident_[static_cast<std::size_t>(ed.j)].push_back(static_cast<int>(e));
    }
  }
}

std::vector<int> PeriodicGraph::components() const {
  std::vector<int> comp(static_cast<std::size_t>(n_), -1);
  int next = 0;
  for (int s = 0; s < n_; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = next;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int e : incident(v)) {
        const auto& ed = edges_[static_cast<std::size_t>(e)];
        const int w = ed.k == v ? ed.j : ed.k;
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

int PeriodicGraph::component_count() const {
  const auto c = components();
  return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

namespace {

Eigen::VectorXd shift_vec(const Shift& s) {
  Eigen::VectorXd m(s.dim());
  for (int l = 0; l < s.dim(); ++l) m(l) = s[l];
  return m;
}

void fill_geometry(PeriodicEdge& e, const Configuration& config) {
  const auto& fk = config.centers[static_cast<std::size_t>(e.k)].frac();
  const auto& fj = config.centers[static_cast<std::size_t>(e.j)].frac();
  e.length = config.basis.to_cartesian(fj + shift_vec(e.shift) - fk).norm();
  e.gap = e.length - 2.0 * config.radius;
}

}  // namespace

PeriodicGraph build_delaunay(const Configuration& config, const DelaunayOptions& opts) {
  const int n = config.size();
  const int d = config.dim();
  if (n < 1) throw InvalidInput("configuration has no centers");
  for (const auto& c : config.centers) {
    if (c.dim() != d) throw InvalidInput("center dimension does not match the basis");
  }
  const double vol = config.basis.volume();
  const double coincide_tol = 1e-10 * std::pow(vol, 1.0 / d);
  for (int k = 0; k < n; ++k) {
    for (int j = k + 1; j < n; ++j) {
      if (torus_distance(config.basis, config.centers[static_cast<std::size_t>(k)],
                         config.centers[static_cast<std::size_t>(j)])
              .dist <= coincide_tol) {
        throw InvalidInput("degenerate configuration: centers " + std::to_string(k) + " and " +
                           std::to_string(j) + " coincide");
      }
    }
  }

  const double radius_bound = config.basis.cell_radius_bound();
  const auto window = enumerate_shifts(d, 2);
  const double threshold = d >= 4 ? opts.facet_tol * std::pow(vol, 1.0 / d)
                                  : opts.facet_tol * std::pow(vol, static_cast<double>(d - 1) / d);

  std::vector<PeriodicEdge> edges;
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd& fk = config.centers[static_cast<std::size_t>(k)].frac();
    std::vector<Eigen::VectorXd> cand;
    std::vector<std::pair<int, const Shift*>> meta;
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd& fj = config.centers[static_cast<std::size_t>(j)].frac();
      for (const auto& m : window) {
        if (j == k && m.is_zero()) continue;
        Eigen::VectorXd v = config.basis.to_cartesian(fj + shift_vec(m) - fk);
        if (v.norm() > 2.0 * radius_bound * (1.0 + 1e-9)) continue;
        cand.push_back(std::move(v));
        meta.emplace_back(j, &m);
      }
    }
    const auto cell = voronoi::compute_cell(cand, d, radius_bound);
    for (const auto& f : cell.facets) {
      if (f.measure <= threshold) continue;
      const auto& [j, mp] = meta[static_cast<std::size_t>(f.candidate)];
      const Shift& m = *mp;
      if (k < j || (k == j && m.lex_positive())) {
        PeriodicEdge e{k, j, m, 0.0, 0.0, f.measure};
        fill_geometry(e, config);
        edges.push_back(std::move(e));
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const PeriodicEdge& a, const PeriodicEdge& b) {
    return std::tie(a.k, a.j, a.shift) < std::tie(b.k, b.j, b.shift);
  });
  return PeriodicGraph(n, std::move(edges));
}

PeriodicGraph with_geometry(const PeriodicGraph& g, const Configuration& config) {
  if (config.size() != g.size()) throw InvalidInput("configuration size does not match the graph");
  auto edges = g.edges();
  for (auto& e : edges) fill_geometry(e, config);
  return PeriodicGraph(g.size(), std::move(edges));
}

namespace {

using IntRow = std::vector<long long>;

// Row-style Hermite normal form of the integer lattice spanned by `rows`.
std::vector<IntRow> hermite_normal_form(std::vector<IntRow> rows, int d) {
  std::vector<IntRow> out;
  int col = 0;
  while (col < d && !rows.empty()) {
    // Euclid on column `col` until at most one row has a nonzero entry there.
    while (true) {
      int piv = -1;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][static_cast<std::size_t>(col)] != 0 &&
            (piv < 0 || std::llabs(rows[i][static_cast<std::size_t>(col)]) <
                            std::llabs(rows[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))) {
          piv = static_cast<int>(i);
        }
      }
      if (piv < 0) break;
      bool reduced = false;
      const auto& p = rows[static_cast<std::size_t>(piv)];
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(i) == piv || rows[i][static_cast<std::size_t>(col)] == 0) continue;
        const long long q = rows[i][static_cast<std::size_t>(col)] / p[static_cast<std::size_t>(col)];
        for (int c = 0; c < d; ++c) rows[i][static_cast<std::size_t>(c)] -= q * p[static_cast<std::size_t>(c)];
        reduced = true;
      }
      if (!reduced) {
        IntRow r = p;
        if (r[static_cast<std::size_t>(col)] < 0) {
          for (auto& v : r) v = -v;
        }
        rows.erase(rows.begin() + piv);
        out.push_back(std::move(r));
        break;
      }
    }
    ++col;
  }
  // Reduce entries above each pivot into [0, pivot).
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t pc = 0;
    while (out[i][pc] == 0) ++pc;
    for (std::size_t r = 0; r < i; ++r) {
      long long q = out[r][pc] / out[i][pc];
      if (out[r][pc] - q * out[i][pc] < 0) --q;
      for (std::size_t c = 0; c < static_cast<std::size_t>(d); ++c) out[r][c] -= q * out[i][c];
    }
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

GraphSignature graph_class_signature(const PeriodicGraph& g) {
  const int n = g.size();
  const auto& edges = g.edges();
  std::ostringstream os;
  os << "n=" << n << ";E=" << edges.size();

  auto degs = g.degrees();
  std::sort(degs.begin(), degs.end());
  os << ";deg=[";
  for (std::size_t i = 0; i < degs.size(); ++i) os << (i ? "," : "") << degs[i];
  os << "]";

  // Color refinement seeded by degree.
  std::vector<int> color = g.degrees();
  std::size_t classes = 0;
  os << ";wl=";
  for (int round = 0; round <= n; ++round) {
    std::vector<std::string> keys(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      std::vector<std::pair<int, int>> nb;
      for (int e : g.incident(v)) {
        const auto& ed = edges[static_cast<std::size_t>(e)];
        if (ed.is_self()) {
          nb.emplace_back(color[static_cast<std::size_t>(v)], 1);
          nb.emplace_back(color[static_cast<std::size_t>(v)], 1);
        } else {
          nb.emplace_back(color[static_cast<std::size_t>(ed.k == v ? ed.j : ed.k)], 0);
        }
      }
      std::sort(nb.begin(), nb.end());
      std::ostringstream k;
      k << color[static_cast<std::size_t>(v)] << ":";
      for (const auto& [c, s] : nb) k << c << (s ? "s" : "") << ",";
      keys[static_cast<std::size_t>(v)] = k.str();
    }
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    std::string all;
    for (const auto& k : sorted) all += k + "|";
    os << std::hex << fnv1a(all) << std::dec << ".";
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int v = 0; v < n; ++v) {
      color[static_cast<std::size_t>(v)] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), keys[static_cast<std::size_t>(v)]) - sorted.begin());
    }
    if (sorted.size() == classes) break;
    classes = sorted.size();
  }

  // Winding lattice: shift sums around fundamental cycles, gauge invariant.
  const int d = edges.empty() ? 0 : edges.front().shift.dim();
  std::vector<IntRow> windings;
  if (d > 0) {
    std::vector<IntRow> off(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<bool> tree(edges.size(), false);
    for (int s = 0; s < n; ++s) {
      if (seen[static_cast<std::size_t>(s)]) continue;
      seen[static_cast<std::size_t>(s)] = true;
      off[static_cast<std::size_t>(s)] = IntRow(static_cast<std::size_t>(d), 0);
      std::queue<int> q;
      q.push(s);
      while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int e : g.incident(v)) {
          const auto& ed = edges[static_cast<std::size_t>(e)];
          if (ed.is_self()) continue;
          const int w = ed.k == v ? ed.j : ed.k;
          if (seen[static_cast<std::size_t>(w)]) continue;
          seen[static_cast<std::size_t>(w)] = true;
          tree[static_cast<std::size_t>(e)] = true;
          IntRow o = off[static_cast<std::size_t>(v)];
          const int sign = ed.k == v ? 1 : -1;
          for (int l = 0; l < d; ++l) o[static_cast<std::size_t>(l)] += sign * ed.shift[l];
          off[static_cast<std::size_t>(w)] = std::move(o);
          q.push(w);
        }
      }
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (tree[e]) continue;
      const auto& ed = edges[e];
      IntRow w(static_cast<std::size_t>(d));
      for (int l = 0; l < d; ++l) {
        w[static_cast<std::size_t>(l)] = off[static_cast<std::size_t>(ed.k)][static_cast<std::size_t>(l)] +
                                         ed.shift[l] - off[static_cast<std::size_t>(ed.j)][static_cast<std::size_t>(l)];
      }
      windings.push_back(std::move(w));
    }
  }
  os << ";wind=[";
  for (const auto& r : hermite_normal_form(windings, d)) {
    os << "(";
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << ")";
  }
  os << "]";
  return {os.str()};
}

}  // namespace densepack
