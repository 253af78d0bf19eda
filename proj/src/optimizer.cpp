#include "densepack/optimizer.hpp"

#include "densepack/errors.hpp"
#include "densepack/special_functions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

namespace densepack {

void GraphClass::validate() const {
  if (n < 1) throw InvalidInput("graph class needs at least one vertex");
  if (d < 1) throw InvalidInput("graph class needs a dimension d >= 1");
  if (static_cast<int>(adjacency.size()) != n) throw InvalidInput("adjacency list count differs from n");
  std::map<std::tuple<int, int, Shift>, int> count;
  for (int k = 0; k < n; ++k) {
    for (const auto& nb : adjacency[static_cast<std::size_t>(k)]) {
      if (nb.j < 0 || nb.j >= n) throw InvalidInput("class neighbor index out of range at vertex " + std::to_string(k));
      if (nb.shift.dim() != d) throw InvalidInput("class shift has the wrong dimension at vertex " + std::to_string(k));
      if (nb.j == k && nb.shift.is_zero()) throw InvalidInput("vertex " + std::to_string(k) + " lists itself with zero shift");
      ++count[{k, nb.j, nb.shift}];
    }
  }
  for (const auto& [key, c] : count) {
    const auto& [k, j, s] = key;
    auto it = count.find({j, k, -s});
    if (it == count.end() || it->second != c) {
      throw InvalidInput("graph class is not symmetric: vertex " + std::to_string(k) + " lists " + std::to_string(j) +
                         " but the reverse entry is missing");
    }
  }
}

bool GraphClass::connected() const {
  if (n <= 1) return true;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int reached = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const auto& nb : adjacency[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(nb.j)]) {
        seen[static_cast<std::size_t>(nb.j)] = true;
        ++reached;
        q.push(nb.j);
      }
    }
  }
  return reached == n;
}

GraphClass class_from_graph(const PeriodicGraph& g) {
  GraphClass cls;
  cls.n = g.size();
  cls.d = g.edges().empty() ? 0 : g.edges().front().shift.dim();
  cls.adjacency.resize(static_cast<std::size_t>(cls.n));
  for (const auto& e : g.edges()) {
    cls.adjacency[static_cast<std::size_t>(e.k)].push_back({e.j, e.shift});
    cls.adjacency[static_cast<std::size_t>(e.j)].push_back({e.k, -e.shift});
  }
  for (auto& adj : cls.adjacency) {
    std::sort(adj.begin(), adj.end(), [](const ClassNeighbor& a, const ClassNeighbor& b) {
      return std::tie(a.j, a.shift) < std::tie(b.j, b.shift);
    });
  }
  return cls;
}

PeriodicGraph class_graph(const GraphClass& cls) {
  std::vector<PeriodicEdge> edges;
  for (int k = 0; k < cls.n; ++k) {
    for (const auto& nb : cls.adjacency[static_cast<std::size_t>(k)]) {
      if (k < nb.j || (k == nb.j && nb.shift.lex_positive())) edges.push_back({k, nb.j, nb.shift, 0.0, 0.0, 0.0});
    }
  }
  return PeriodicGraph(cls.n, std::move(edges));
}

Eigen::MatrixXd class_laplacian(const GraphClass& cls) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(cls.n, cls.n);
  for (int k = 0; k < cls.n; ++k) {
    for (const auto& nb : cls.adjacency[static_cast<std::size_t>(k)]) {
      L(k, k) += 1.0;
      L(k, nb.j) -= 1.0;
    }
  }
  return L;
}

namespace {

Eigen::MatrixXd shift_sums(const GraphClass& cls) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(cls.n, cls.d);
  for (int k = 0; k < cls.n; ++k) {
    for (const auto& nb : cls.adjacency[static_cast<std::size_t>(k)]) {
      for (int l = 0; l < cls.d; ++l) S(k, l) += nb.shift[l];
    }
  }
  return S;
}

Eigen::VectorXd stationarity_defect(const GraphClass& cls, const Basis& basis, const Eigen::MatrixXd& X, int k) {
  const Eigen::VectorXd ak = realize(X, k, basis);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.dim());
  for (const auto& nb : cls.adjacency[static_cast<std::size_t>(k)]) {
    v += ak - realize(X, nb.j, basis) - basis.offset(nb.shift);
  }
  return v;
}

}  // namespace

Eigen::MatrixXd solve_centers_symbolic(const GraphClass& cls, const SolveOptions& opts) {
  cls.validate();
  const int n = cls.n;
  if (!cls.connected()) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(class_laplacian(cls));
    std::ostringstream os;
    os << "graph class is disconnected: system rank " << lu.rank() << " < n - 1 = " << n - 1
       << "; centers are not determined up to a single translation";
    throw RankDeficiencyError(os.str());
  }
  const Eigen::MatrixXd L = class_laplacian(cls);
  const Eigen::MatrixXd S = shift_sums(cls);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
  K.topLeftCorner(n, n) = L;
  K.block(0, n, n, 1).setOnes();
  K.block(n, 0, 1, n).setOnes();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 1, cls.d);
  rhs.topRows(n) = S;
  const Eigen::MatrixXd sol = K.fullPivLu().solve(rhs);
  Eigen::MatrixXd X = sol.topRows(n);
  const double defect = (L * X - S).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if (!X.allFinite() || defect > opts.tol * scale) {
    std::ostringstream os;
    os << "graph class admits no stationary centers: residual " << defect << " after solve";
    throw InfeasibleClassError(os.str());
  }
  return X;
}

Eigen::VectorXd realize(const Eigen::MatrixXd& coeffs, int k, const Basis& basis) {
  return basis.to_cartesian(coeffs.row(k).transpose());
}

double stationarity_residual(const GraphClass& cls, const Basis& basis, const Eigen::MatrixXd& coeffs) {
  double r = 0.0;
  for (int k = 0; k < cls.n; ++k) {
    const int N = cls.degree(k);
    if (N == 0) continue;
    r = std::max(r, stationarity_defect(cls, basis, coeffs, k).norm() / N);
  }
  return r;
}

Eigen::VectorXd summed_residual(const GraphClass& cls, const Basis& basis, const Eigen::MatrixXd& coeffs) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.dim());
  for (int k = 0; k < cls.n; ++k) v += stationarity_defect(cls, basis, coeffs, k);
  return v;
}

CenterSolution solve_centers(const GraphClass& cls, const Basis& basis, const SolveOptions& opts) {
  if (cls.d != basis.dim()) throw InvalidInput("class dimension does not match the basis");
  CenterSolution sol;
  sol.coeffs = solve_centers_symbolic(cls, opts);
  for (int k = 0; k < cls.n; ++k) sol.centers.emplace_back(Eigen::VectorXd(sol.coeffs.row(k).transpose()));
  sol.residual = stationarity_residual(cls, basis, sol.coeffs);
  return sol;
}

double spread(const GraphClass& cls, const Basis& basis, const Eigen::MatrixXd& coeffs) {
  double g = 0.0;
  for (int k = 0; k < cls.n; ++k) {
    const Eigen::VectorXd ak = realize(coeffs, k, basis);
    for (const auto& nb : cls.adjacency[static_cast<std::size_t>(k)]) {
      g += (realize(coeffs, nb.j, basis) + basis.offset(nb.shift) - ak).squaredNorm();
    }
  }
  return g;
}

Eigen::MatrixXd relax_centers(const GraphClass& cls, const Eigen::MatrixXd& start, const RelaxOptions& opts) {
  cls.validate();
  if (start.rows() != cls.n || start.cols() != cls.d) throw InvalidInput("start table has the wrong shape");
  Eigen::MatrixXd X = start;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double change = 0.0;
    for (int k = 0; k < cls.n; ++k) {
      int others = 0;
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(cls.d);
      for (const auto& nb : cls.adjacency[static_cast<std::size_t>(k)]) {
        for (int l = 0; l < cls.d; ++l) acc(l) += nb.shift[l];
        if (nb.j != k) {
          acc += X.row(nb.j);
          ++others;
        }
      }
      if (others == 0) continue;
      const Eigen::RowVectorXd next = acc / others;
      change = std::max(change, (next - X.row(k)).cwiseAbs().maxCoeff());
      X.row(k) = next;
    }
    if (change <= opts.tol * (1.0 + X.cwiseAbs().maxCoeff())) return X;
  }
  throw ConvergenceError("center relaxation hit the sweep limit",
                         std::vector<double>(X.data(), X.data() + X.size()));
}

SpreadResult maximize_spread(const GraphClass& cls, const Basis& basis, int restarts, std::uint64_t seed) {
  SpreadResult res;
  res.solution = solve_centers(cls, basis);
  res.value = spread(cls, basis, res.solution.coeffs);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd start = res.solution.coeffs;
    for (Eigen::Index i = 0; i < start.size(); ++i) start.data()[i] += jitter(rng);
    res.restarts.push_back(spread(cls, basis, relax_centers(cls, start)));
  }
  return res;
}

double unit_ball_volume(int d) { return std::pow(std::numbers::pi, 0.5 * d) / special::gamma_half(d + 2); }

double packing_density(const Configuration& config) {
  return config.size() * unit_ball_volume(config.dim()) * std::pow(config.radius, config.dim()) /
         config.basis.volume();
}

PackReport pack_in_class(const GraphClass& cls, const Basis& basis, double facet_tol) {
  auto sol = solve_centers(cls, basis);
  Configuration config{basis, sol.centers, 0.0};
  const auto cp = closest_pair(config);
  if (cp.dist <= 1e-10 * std::pow(basis.volume(), 1.0 / basis.dim())) {
    throw InfeasibleClassError("degenerate class: centers " + std::to_string(cp.k) + " and " + std::to_string(cp.j) +
                               " coincide at the stationary point");
  }
  config.radius = 0.5 * cp.dist;
  PackReport rep{config, std::move(sol), packing_density(config), false, {}, {}};
  rep.class_signature = graph_class_signature(class_graph(cls)).text;
  rep.realized_signature = graph_class_signature(build_delaunay(config, {facet_tol})).text;
  rep.class_violation = rep.class_signature != rep.realized_signature;
  return rep;
}

ScanResult scan_bases(const GraphClass& cls, const std::vector<Eigen::MatrixXd>& bases, double facet_tol,
                      double touch_tol, int threads) {
  ScanResult res;
  res.entries.resize(bases.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < bases.size(); i = next++) {
      ScanEntry& e = res.entries[i];
      try {
        e.basis.emplace(bases[i]);
        const auto pr = pack_in_class(cls, *e.basis, facet_tol);
        e.density = pr.density;
        e.class_violation = pr.class_violation;
        e.percolation = detect_percolation(pr.config, touch_tol);
        e.accepted = e.percolation.isotropy_necessary;
        e.valid = true;
      } catch (const Error& ex) {
        e.valid = false;
        e.error = ex.what();
      }
    }
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(bases.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < res.entries.size(); ++i) {
    const auto& e = res.entries[i];
    if (e.valid && e.accepted && (res.best < 0 || e.density > res.entries[static_cast<std::size_t>(res.best)].density)) {
      res.best = static_cast<int>(i);
    }
  }
  return res;
}

std::vector<Eigen::MatrixXd> planar_basis_grid(const std::vector<double>& angles, const std::vector<double>& ratios) {
  std::vector<Eigen::MatrixXd> out;
  for (double a : angles) {
    for (double q : ratios) {
      Eigen::MatrixXd M(2, 2);
      M << 1.0, q * std::cos(a), 0.0, q * std::sin(a);
      out.push_back(M);
    }
  }
  return out;
}

}  // namespace densepack
