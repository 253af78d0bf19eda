#include "densepack/voronoi.hpp"

#include "densepack/errors.hpp"
#include "densepack/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace densepack::voronoi {

namespace {

constexpr int kBoxLabel = -1;

std::vector<int> order_by_norm(const std::vector<Eigen::VectorXd>& c) {
  std::vector<int> idx(c.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return c[static_cast<std::size_t>(a)].squaredNorm() < c[static_cast<std::size_t>(b)].squaredNorm();
  });
  return idx;
}

// ---- d = 1 ----------------------------------------------------------------

Cell cell_1d(const std::vector<Eigen::VectorXd>& cand) {
  double lo = -1e300, hi = 1e300;
  int lo_label = kBoxLabel, hi_label = kBoxLabel;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const double v = cand[i](0);
    if (v > 0.0 && 0.5 * v < hi) {
      hi = 0.5 * v;
      hi_label = static_cast<int>(i);
    } else if (v < 0.0 && 0.5 * v > lo) {
      lo = 0.5 * v;
      lo_label = static_cast<int>(i);
    }
  }
  if (lo_label == kBoxLabel || hi_label == kBoxLabel) {
    throw NumericalFailure("Voronoi cell is not closed by the candidate images");
  }
  Cell cell;
  cell.facets = {{lo_label, 1.0}, {hi_label, 1.0}};
  cell.max_vertex_norm = std::max(-lo, hi);
  return cell;
}

// ---- d = 2 ----------------------------------------------------------------

struct Polygon {
  std::vector<Eigen::Vector2d> v;
  std::vector<int> label;  // label[i] belongs to the edge v[i] -> v[i+1]
};

void clip_polygon(Polygon& poly, const Eigen::Vector2d& nrm, int candidate, double eps) {
  const double off = 0.5 * nrm.squaredNorm();
  const std::size_t n = poly.v.size();
  std::vector<double> s(n);
  bool any_out = false;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = poly.v[i].dot(nrm) - off;
    any_out = any_out || s[i] > eps;
  }
  if (!any_out) return;
  Polygon out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n;
    const bool in_p = s[i] <= eps;
    const bool in_q = s[ip] <= eps;
    if (in_p) {
      out.v.push_back(poly.v[i]);
      out.label.push_back(poly.label[i]);
    }
    if (in_p != in_q) {
      const double t = s[i] / (s[i] - s[ip]);
      out.v.push_back(poly.v[i] + t * (poly.v[ip] - poly.v[i]));
      out.label.push_back(in_p ? candidate : poly.label[i]);
    }
  }
  poly = std::move(out);
}

Cell cell_2d(const std::vector<Eigen::VectorXd>& cand, double box) {
  Polygon poly;
  poly.v = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  poly.label.assign(4, kBoxLabel);
  double rmax = std::sqrt(2.0) * box;
  for (int idx : order_by_norm(cand)) {
    const Eigen::Vector2d v = cand[static_cast<std::size_t>(idx)].head<2>();
    if (0.5 * v.norm() > rmax * (1.0 + 1e-12)) break;
    clip_polygon(poly, v, idx, 1e-13 * (v.norm() * rmax + 1.0));
    rmax = 0.0;
    for (const auto& p : poly.v) rmax = std::max(rmax, p.norm());
  }
  Cell cell;
  cell.max_vertex_norm = rmax;
  const std::size_t n = poly.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double len = (poly.v[(i + 1) % n] - poly.v[i]).norm();
    if (poly.label[i] == kBoxLabel) {
      if (len > 1e-9 * rmax) throw NumericalFailure("Voronoi cell is not closed by the candidate images");
      continue;
    }
    auto it = std::find_if(cell.facets.begin(), cell.facets.end(),
                           [&](const Facet& f) { return f.candidate == poly.label[i]; });
    if (it == cell.facets.end()) {
      cell.facets.push_back({poly.label[i], len});
    } else {
      it->measure += len;
    }
  }
  return cell;
}

// ---- d = 3 ----------------------------------------------------------------

struct Face {
  int label = kBoxLabel;
  std::vector<Eigen::Vector3d> v;
};

double face_area(const Face& f) {
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  const std::size_t n = f.v.size();
  for (std::size_t i = 0; i < n; ++i) acc += f.v[i].cross(f.v[(i + 1) % n]);
  return 0.5 * acc.norm();
}

void clip_polyhedron(std::vector<Face>& faces, const Eigen::Vector3d& nrm, int candidate, double eps,
                     double merge_tol) {
  const double off = 0.5 * nrm.squaredNorm();
  bool any_out = false;
  for (const auto& f : faces) {
    for (const auto& p : f.v) any_out = any_out || p.dot(nrm) - off > eps;
  }
  if (!any_out) return;

  std::vector<Face> out;
  std::vector<Eigen::Vector3d> cap;
  auto add_cap = [&](const Eigen::Vector3d& p) {
    for (const auto& q : cap) {
      if ((q - p).norm() <= merge_tol) return;
    }
    cap.push_back(p);
  };
  for (const auto& f : faces) {
    const std::size_t n = f.v.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = f.v[i].dot(nrm) - off;
    Face g;
    g.label = f.label;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ip = (i + 1) % n;
      const bool in_p = s[i] <= eps;
      const bool in_q = s[ip] <= eps;
      if (in_p) {
        g.v.push_back(f.v[i]);
        if (s[i] >= -eps) add_cap(f.v[i]);
      }
      if (in_p != in_q) {
        const double t = s[i] / (s[i] - s[ip]);
        const Eigen::Vector3d x = f.v[i] + t * (f.v[ip] - f.v[i]);
        g.v.push_back(x);
        add_cap(x);
      }
    }
    if (g.v.size() >= 3) out.push_back(std::move(g));
  }
  if (cap.size() >= 3) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (const auto& p : cap) c += p;
    c /= static_cast<double>(cap.size());
    const Eigen::Vector3d nz = nrm.normalized();
    Eigen::Vector3d u = nz.unitOrthogonal();
    Eigen::Vector3d w = nz.cross(u);
    std::vector<std::pair<double, Eigen::Vector3d>> ang;
    for (const auto& p : cap) ang.emplace_back(std::atan2((p - c).dot(w), (p - c).dot(u)), p);
    std::sort(ang.begin(), ang.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Face capf;
    capf.label = candidate;
    for (const auto& [a, p] : ang) capf.v.push_back(p);
    out.push_back(std::move(capf));
  }
  faces = std::move(out);
}

Cell cell_3d(const std::vector<Eigen::VectorXd>& cand, double box) {
  std::vector<Face> faces;
  const double b = box;
  auto P = [&](double x, double y, double z) { return Eigen::Vector3d(x * b, y * b, z * b); };
  faces.push_back({kBoxLabel, {P(-1, -1, -1), P(-1, 1, -1), P(1, 1, -1), P(1, -1, -1)}});
  faces.push_back({kBoxLabel, {P(-1, -1, 1), P(1, -1, 1), P(1, 1, 1), P(-1, 1, 1)}});
  faces.push_back({kBoxLabel, {P(-1, -1, -1), P(1, -1, -1), P(1, -1, 1), P(-1, -1, 1)}});
  faces.push_back({kBoxLabel, {P(-1, 1, -1), P(-1, 1, 1), P(1, 1, 1), P(1, 1, -1)}});
  faces.push_back({kBoxLabel, {P(-1, -1, -1), P(-1, -1, 1), P(-1, 1, 1), P(-1, 1, -1)}});
  faces.push_back({kBoxLabel, {P(1, -1, -1), P(1, 1, -1), P(1, 1, 1), P(1, -1, 1)}});
  double rmax = std::sqrt(3.0) * box;
  for (int idx : order_by_norm(cand)) {
    const Eigen::Vector3d v = cand[static_cast<std::size_t>(idx)].head<3>();
    if (0.5 * v.norm() > rmax * (1.0 + 1e-12)) break;
    clip_polyhedron(faces, v, idx, 1e-13 * (v.norm() * rmax + 1.0), 1e-11 * (rmax + 1.0));
    rmax = 0.0;
    for (const auto& f : faces) {
      for (const auto& p : f.v) rmax = std::max(rmax, p.norm());
    }
  }
  Cell cell;
  cell.max_vertex_norm = rmax;
  for (const auto& f : faces) {
    const double area = face_area(f);
    if (f.label == kBoxLabel) {
      if (area > 1e-9 * rmax * rmax) throw NumericalFailure("Voronoi cell is not closed by the candidate images");
      continue;
    }
    auto it = std::find_if(cell.facets.begin(), cell.facets.end(),
                           [&](const Facet& x) { return x.candidate == f.label; });
    if (it == cell.facets.end()) {
      cell.facets.push_back({f.label, area});
    } else {
      it->measure += area;
    }
  }
  return cell;
}

// ---- d >= 4 ---------------------------------------------------------------

Cell cell_lp(const std::vector<Eigen::VectorXd>& cand, double radius_bound) {
  Cell cell;
  cell.kind = MeasureKind::inradius;
  cell.max_vertex_norm = radius_bound;
  for (std::size_t q = 0; q < cand.size(); ++q) {
    if (0.5 * cand[q].norm() > radius_bound * (1.0 + 1e-12)) continue;
    const double rho = facet_inradius(cand, static_cast<int>(q), radius_bound);
    if (rho > 0.0) cell.facets.push_back({static_cast<int>(q), rho});
  }
  return cell;
}

}  // namespace

double facet_inradius(const std::vector<Eigen::VectorXd>& cand, int which, double radius_bound) {
  const Eigen::VectorXd& vq = cand[static_cast<std::size_t>(which)];
  const int d = static_cast<int>(vq.size());
  // Orthonormal basis of the bisector hyperplane: columns 1..d-1 of a full QR of vq.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(vq);
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd U = Q.rightCols(d - 1);
  const Eigen::VectorXd x0 = 0.5 * vq;

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (static_cast<int>(i) == which) continue;
    const Eigen::VectorXd& vi = cand[i];
    if (0.5 * vi.norm() > radius_bound * (1.0 + 1e-12)) continue;
    const Eigen::VectorXd proj = U.transpose() * vi;
    Eigen::VectorXd row(d);
    row.head(d - 1) = proj;
    row(d - 1) = proj.norm();
    rows.push_back(row);
    rhs.push_back(0.5 * vi.squaredNorm() - x0.dot(vi));
  }
  Eigen::VectorXd cap = Eigen::VectorXd::Zero(d);
  cap(d - 1) = 1.0;
  rows.push_back(cap);
  rhs.push_back(radius_bound);

  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), d);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    b(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  c(d - 1) = 1.0;
  const auto res = lp::maximize(A, b, c);
  if (res.status != lp::Status::optimal) return -1.0;
  return res.value;
}

Cell compute_cell(const std::vector<Eigen::VectorXd>& candidates, int d, double radius_bound) {
  if (d == 1) return cell_1d(candidates);
  const double box = 2.0 * radius_bound + 1.0;
  if (d == 2) return cell_2d(candidates, box);
  if (d == 3) return cell_3d(candidates, box);
  return cell_lp(candidates, radius_bound);
}

}  // namespace densepack::voronoi
