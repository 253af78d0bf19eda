#include "densepack/energy.hpp"

#include "densepack/errors.hpp"

#include <cmath>
#include <queue>
#include <sstream>

namespace densepack {

Eigen::VectorXd unit_direction(const Eigen::VectorXd& v) {
  const double nrm = v.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InvalidInput("flux direction must be a nonzero finite vector");
  return v / nrm;
}

double edge_jump(const PotentialField& field, const PeriodicEdge& e, const Basis& basis) {
  if (e.shift.is_zero()) return 0.0;
  return field.amplitude * field.xi.dot(basis.offset(e.shift));
}

double edge_difference(const PotentialField& field, const PeriodicEdge& e, const Basis& basis) {
  return field.t(e.k) - field.t(e.j) - edge_jump(field, e, basis);
}

double edge_weight(const FluxModel& model, double gap) {
  if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
  const double w = g0_main(model, gap);
  if (!(w > 0.0)) {
    std::ostringstream os;
    os << "flux weight is not positive at gap " << gap << " (logarithmic term needs gap < r)";
    throw InvalidInput(os.str());
  }
  return w;
}

namespace {

void check_field(const PotentialField& field, const PeriodicGraph& graph, const Basis& basis) {
  if (field.xi.size() != basis.dim()) throw InvalidInput("flux direction has the wrong dimension");
  if (std::abs(field.xi.norm() - 1.0) > 1e-12) throw InvalidInput("flux direction must be a unit vector");
  if (field.t.size() != graph.size()) throw InvalidInput("potential vector has the wrong length");
}

double objective(const PotentialProblem& P, const Eigen::VectorXd& t) {
  double f = 0.0;
  for (std::size_t e = 0; e < P.w.size(); ++e) {
    const double d = t(P.k[e]) - t(P.j[e]) - P.b[e];
    f += P.w[e] * std::pow(std::abs(d), P.p);
  }
  return f;
}

Eigen::VectorXd gradient(const PotentialProblem& P, const Eigen::VectorXd& t) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(P.n);
  for (std::size_t e = 0; e < P.w.size(); ++e) {
    if (P.k[e] == P.j[e]) continue;
    const double d = t(P.k[e]) - t(P.j[e]) - P.b[e];
    const double v = P.p * P.w[e] * std::pow(std::abs(d), P.p - 2) * d;
    g(P.k[e]) += v;
    g(P.j[e]) -= v;
  }
  return g;
}

Eigen::MatrixXd hessian(const PotentialProblem& P, const Eigen::VectorXd& t) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(P.n, P.n);
  for (std::size_t e = 0; e < P.w.size(); ++e) {
    const int a = P.k[e], c = P.j[e];
    if (a == c) continue;
    const double d = t(a) - t(c) - P.b[e];
    const double h = P.p * (P.p - 1) * P.w[e] * (P.p == 2 ? 1.0 : std::pow(std::abs(d), P.p - 2));
    H(a, a) += h;
    H(c, c) += h;
    H(a, c) -= h;
    H(c, a) -= h;
  }
  return H;
}

// Component id per vertex, counting only edges between distinct vertices.
std::vector<int> components(const PotentialProblem& P, int& count) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(P.n));
  for (std::size_t e = 0; e < P.k.size(); ++e) {
    if (P.k[e] == P.j[e]) continue;
    adj[static_cast<std::size_t>(P.k[e])].push_back(P.j[e]);
    adj[static_cast<std::size_t>(P.j[e])].push_back(P.k[e]);
  }
  std::vector<int> comp(static_cast<std::size_t>(P.n), -1);
  count = 0;
  for (int s = 0; s < P.n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = count;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = count;
          q.push(w);
        }
      }
    }
    ++count;
  }
  return comp;
}

// Solves H x = rhs subject to mean zero on each component.
Eigen::VectorXd constrained_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& rhs, const std::vector<int>& comp,
                                  int ncomp) {
  const int n = static_cast<int>(H.rows());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + ncomp, n + ncomp);
  K.topLeftCorner(n, n) = H;
  for (int v = 0; v < n; ++v) {
    K(v, n + comp[static_cast<std::size_t>(v)]) = 1.0;
    K(n + comp[static_cast<std::size_t>(v)], v) = 1.0;
  }
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n + ncomp);
  r.head(n) = rhs;
  return K.fullPivLu().solve(r).head(n);
}

void center_components(Eigen::VectorXd& t, const std::vector<int>& comp, int ncomp) {
  std::vector<double> sum(static_cast<std::size_t>(ncomp), 0.0);
  std::vector<int> cnt(static_cast<std::size_t>(ncomp), 0);
  for (Eigen::Index v = 0; v < t.size(); ++v) {
    sum[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] += t(v);
    ++cnt[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])];
  }
  for (Eigen::Index v = 0; v < t.size(); ++v) {
    const auto c = static_cast<std::size_t>(comp[static_cast<std::size_t>(v)]);
    t(v) -= sum[c] / cnt[c];
  }
}

}  // namespace

PotentialSolution solve_potentials(const PotentialProblem& P, const MinimizeOptions& opts) {
  if (P.n < 1) throw InvalidInput("potential problem has no vertices");
  if (P.p < 2) throw InvalidInput("exponent p must be >= 2");
  if (P.k.size() != P.j.size() || P.k.size() != P.w.size() || P.k.size() != P.b.size()) {
    throw InvalidInput("potential problem arrays differ in length");
  }
  for (std::size_t e = 0; e < P.w.size(); ++e) {
    if (!(P.w[e] >= 0.0) || !std::isfinite(P.w[e])) throw InvalidInput("edge weights must be finite and nonnegative");
  }
  int ncomp = 0;
  const auto comp = components(P, ncomp);

  PotentialSolution sol;
  sol.t = Eigen::VectorXd::Zero(P.n);
  const bool linear = opts.method == PotentialMethod::linear ||
                      (opts.method == PotentialMethod::automatic && P.p == 2);
  if (linear) {
    if (P.p != 2) throw InvalidInput("the linear solver needs p = 2");
    // Stationarity of sum w (t_k - t_j - b)^2: L t = B^T W b.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(P.n);
    for (std::size_t e = 0; e < P.w.size(); ++e) {
      if (P.k[e] == P.j[e]) continue;
      rhs(P.k[e]) += 2.0 * P.w[e] * P.b[e];
      rhs(P.j[e]) -= 2.0 * P.w[e] * P.b[e];
    }
    sol.t = constrained_solve(hessian(P, sol.t), rhs, comp, ncomp);
    center_components(sol.t, comp, ncomp);
    sol.iterations = 1;
    sol.objective = objective(P, sol.t);
    sol.grad_norm = gradient(P, sol.t).norm();
    return sol;
  }

  Eigen::VectorXd t = sol.t;
  double f = objective(P, t);
  Eigen::VectorXd g = gradient(P, t);
  const double g0 = g.norm();
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    if (g.norm() <= opts.tol * g0 || g0 == 0.0) break;
    Eigen::MatrixXd H = hessian(P, t);
    const double reg = 1e-14 * (H.trace() / P.n + 1e-300);
    H.diagonal().array() += reg;
    Eigen::VectorXd dir = constrained_solve(H, -g, comp, ncomp);
    double slope = g.dot(dir);
    if (!dir.allFinite() || !(slope < 0.0)) {
      dir = -g;
      slope = -g.squaredNorm();
    }
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd trial = t + alpha * dir;
      const double ft = objective(P, trial);
      if (ft <= f + 1e-4 * alpha * slope) {
        t = trial;
        f = ft;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    g = gradient(P, t);
    if (!accepted) {
      // No further decrease is representable; accept if close enough.
      if (g.norm() <= std::sqrt(opts.tol) * g0) break;
      center_components(t, comp, ncomp);
      throw ConvergenceError("potential minimization stalled in the line search",
                             std::vector<double>(t.data(), t.data() + t.size()));
    }
  }
  center_components(t, comp, ncomp);
  if (it >= opts.max_iter && g.norm() > opts.tol * g0) {
    throw ConvergenceError("potential minimization hit the iteration limit (" + std::to_string(opts.max_iter) + ")",
                           std::vector<double>(t.data(), t.data() + t.size()));
  }
  sol.t = t;
  sol.objective = objective(P, t);
  sol.iterations = it;
  sol.grad_norm = g.norm();
  return sol;
}

double energy(const PeriodicGraph& graph, const FluxModel& model, const PotentialField& field, const Basis& basis) {
  check_field(field, graph, basis);
  double sum = 0.0;
  for (const auto& e : graph.edges()) {
    if (!(e.gap > 0.0)) return std::numeric_limits<double>::infinity();
    sum += edge_weight(model, e.gap) * std::pow(std::abs(edge_difference(field, e, basis)), model.p());
  }
  return sum / basis.volume();
}

PotentialProblem potential_problem(const PeriodicGraph& graph, const FluxModel& model, const Eigen::VectorXd& xi,
                                   const Basis& basis, double amplitude) {
  PotentialField field{xi, Eigen::VectorXd::Zero(graph.size()), amplitude};
  check_field(field, graph, basis);
  PotentialProblem P;
  P.n = graph.size();
  P.p = model.p();
  for (const auto& e : graph.edges()) {
    if (!(e.gap > 0.0)) {
      std::ostringstream os;
      os << "balls " << e.k << " and " << e.j << " touch or overlap (gap " << e.gap << "); energy is infinite";
      throw InvalidInput(os.str());
    }
    P.k.push_back(e.k);
    P.j.push_back(e.j);
    P.w.push_back(edge_weight(model, e.gap));
    P.b.push_back(edge_jump(field, e, basis));
  }
  return P;
}

EnergyReport minimize_potentials(const PeriodicGraph& graph, const FluxModel& model, const Eigen::VectorXd& xi,
                                 const Basis& basis, const MinimizeOptions& opts, double amplitude) {
  const auto P = potential_problem(graph, model, xi, basis, amplitude);
  const auto sol = solve_potentials(P, opts);
  EnergyReport rep;
  rep.t_opt = sol.t;
  rep.xi = xi;
  rep.amplitude = amplitude;
  rep.iterations = sol.iterations;
  double sum = 0.0;
  for (std::size_t e = 0; e < P.w.size(); ++e) {
    const double d = sol.t(P.k[e]) - sol.t(P.j[e]) - P.b[e];
    const double c = 2.0 * P.w[e] * std::pow(std::abs(d), P.p);
    rep.per_edge.push_back(c);
    sum += c;
  }
  rep.sigma = sum / (2.0 * basis.volume());
  return rep;
}

}  // namespace densepack
