#include "densepack/torus.hpp"

#include "densepack/errors.hpp"
#include "densepack/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace densepack {

bool Shift::is_zero() const {
  return std::all_of(s_.begin(), s_.end(), [](int v) { return v == 0; });
}

bool Shift::lex_positive() const {
  for (int v : s_) {
    if (v != 0) return v > 0;
  }
  return false;
}

Shift Shift::operator-() const {
  Shift r = *this;
  for (auto& v : r.s_) v = -v;
  return r;
}

Shift Shift::operator+(const Shift& o) const {
  Shift r = *this;
  for (std::size_t i = 0; i < s_.size(); ++i) r.s_[i] += o.s_[i];
  return r;
}

Shift Shift::operator-(const Shift& o) const { return *this + (-o); }

std::vector<Shift> enumerate_shifts(int d, int w) {
  std::vector<Shift> out;
  Shift cur(std::vector<int>(static_cast<std::size_t>(d), -w));
  while (true) {
    out.push_back(cur);
    int l = d - 1;
    while (l >= 0 && cur[l] == w) {
      cur[l] = -w;
      --l;
    }
    if (l < 0) break;
    ++cur[l];
  }
  return out;
}

namespace {

// Max of each fractional coordinate over the lattice Voronoi cell, using the
// lattice vectors in {-2..2}^d as candidate facet normals.
Eigen::VectorXd lattice_voronoi_extent(const Eigen::MatrixXd& B, const Eigen::MatrixXd& Binv) {
  const int d = static_cast<int>(B.cols());
  std::vector<Eigen::VectorXd> normals;
  for (const auto& s : enumerate_shifts(d, 2)) {
    if (s.is_zero()) continue;
    Eigen::VectorXd m(d);
    for (int l = 0; l < d; ++l) m(l) = s[l];
    normals.push_back(B * m);
  }
  Eigen::MatrixXd A(static_cast<Eigen::Index>(normals.size()), d);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(normals.size()));
  for (std::size_t i = 0; i < normals.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = normals[i].transpose();
    rhs(static_cast<Eigen::Index>(i)) = 0.5 * normals[i].squaredNorm();
  }
  Eigen::VectorXd extent(d);
  for (int l = 0; l < d; ++l) {
    // The cell is centrally symmetric, so max f_l = max |f_l|.
    const Eigen::VectorXd w = Binv.row(l).transpose();
    const auto res = lp::maximize(A, rhs, w);
    extent(l) = res.status == lp::Status::optimal ? res.value : std::numeric_limits<double>::infinity();
  }
  return extent;
}

}  // namespace

Basis::Basis(const Eigen::MatrixXd& columns) : matrix_(columns) {
  const int d = static_cast<int>(matrix_.cols());
  if (d < 1 || matrix_.rows() != matrix_.cols()) {
    throw InvalidInput("basis must consist of d vectors with d components each");
  }
  if (!matrix_.allFinite()) throw InvalidInput("basis has non-finite entries");
  double prod = 1.0;
  for (int l = 0; l < d; ++l) prod *= matrix_.col(l).norm();
  volume_ = std::abs(matrix_.determinant());
  if (!(prod > 0.0) || volume_ <= 1e-12 * prod) {
    throw InvalidInput("invalid basis: vectors are linearly dependent (|det| = 0)");
  }
  inverse_ = matrix_.inverse();
  extent_ = lattice_voronoi_extent(matrix_, inverse_);
  if (extent_.maxCoeff() > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "cell too skewed: the {-1,0,1}^d image window does not reach all minimal images "
          "(Voronoi extent "
       << extent_.maxCoeff() << " > 1 in fractional coordinates)";
    throw InvalidInput(os.str());
  }
}

Basis Basis::from_rows(const std::vector<std::vector<double>>& rows) {
  const auto d = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index l = 0; l < d; ++l) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(l)].size()) != d) {
      throw InvalidInput("basis vector " + std::to_string(l) + " has the wrong number of components");
    }
    for (Eigen::Index i = 0; i < d; ++i) m(i, l) = rows[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
  }
  return Basis(m);
}

Basis Basis::identity(int d, double side) { return Basis(Eigen::MatrixXd::Identity(d, d) * side); }

double Basis::cell_radius_bound() const {
  double r = 0.0;
  for (int l = 0; l < dim(); ++l) r += extent_(l) * matrix_.col(l).norm();
  return r;
}

Eigen::VectorXd Basis::offset(const Shift& s) const {
  Eigen::VectorXd m(dim());
  for (int l = 0; l < dim(); ++l) m(l) = s[l];
  return matrix_ * m;
}

std::vector<std::vector<double>> Basis::rows() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(dim()));
  for (int l = 0; l < dim(); ++l) {
    for (int i = 0; i < dim(); ++i) out[static_cast<std::size_t>(l)].push_back(matrix_(i, l));
  }
  return out;
}

TorusPoint::TorusPoint(const Eigen::VectorXd& frac) : frac_(frac) {
  for (Eigen::Index i = 0; i < frac_.size(); ++i) {
    if (!std::isfinite(frac_(i))) throw InvalidInput("non-finite fractional coordinate");
    double v = frac_(i) - std::floor(frac_(i));
    if (v >= 1.0) v = 0.0;
    frac_(i) = v;
  }
}

TorusPoint::TorusPoint(std::initializer_list<double> frac)
    : TorusPoint(Eigen::Map<const Eigen::VectorXd>(frac.begin(), static_cast<Eigen::Index>(frac.size()))) {}

TorusDistance torus_distance(const Basis& basis, const TorusPoint& a, const TorusPoint& b) {
  const int d = basis.dim();
  const Eigen::VectorXd diff = a.frac() - b.frac();
  TorusDistance best{std::numeric_limits<double>::infinity(), Shift(d)};
  double best2 = std::numeric_limits<double>::infinity();
  const double scale = basis.matrix().squaredNorm();
  for (const auto& m : enumerate_shifts(d, 1)) {
    Eigen::VectorXd f = diff;
    for (int l = 0; l < d; ++l) f(l) += m[l];
    const double d2 = basis.to_cartesian(f).squaredNorm();
    // Strict improvement beyond rounding keeps the lexicographically first minimizer.
    if (d2 < best2 - 1e-13 * scale) {
      best2 = d2;
      best.shift = m;
    }
  }
  best.dist = std::sqrt(best2);
  return best;
}

double cell_volume(const Basis& basis) { return basis.volume(); }

double shortest_lattice_vector(const Basis& basis) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : enumerate_shifts(basis.dim(), 2)) {
    if (m.is_zero()) continue;
    best = std::min(best, basis.offset(m).norm());
  }
  return best;
}

ClosestPair closest_pair(const Configuration& config) {
  ClosestPair best{-1, -1, std::numeric_limits<double>::infinity()};
  const int n = config.size();
  for (int k = 0; k < n; ++k) {
    for (int j = k + 1; j < n; ++j) {
      const double dist = torus_distance(config.basis, config.centers[static_cast<std::size_t>(k)],
                                         config.centers[static_cast<std::size_t>(j)])
                              .dist;
      if (dist < best.dist) best = {k, j, dist};
    }
  }
  const double self = shortest_lattice_vector(config.basis);
  if (self < best.dist) best = {0, 0, self};
  return best;
}

void check_non_overlapping(const Configuration& config, double tol) {
  const int n = config.size();
  const double two_r = 2.0 * config.radius;
  for (int k = 0; k < n; ++k) {
    for (int j = k + 1; j < n; ++j) {
      const double dist = torus_distance(config.basis, config.centers[static_cast<std::size_t>(k)],
                                         config.centers[static_cast<std::size_t>(j)])
                              .dist;
      if (dist < two_r * (1.0 - tol)) {
        std::ostringstream os;
        os << "balls " << k << " and " << j << " overlap: center distance " << dist << " < 2r = " << two_r;
        throw InvalidInput(os.str());
      }
    }
  }
  const double self = shortest_lattice_vector(config.basis);
  if (n > 0 && self < two_r * (1.0 - tol)) {
    std::ostringstream os;
    os << "balls overlap their own periodic images: shortest lattice vector " << self << " < 2r = " << two_r;
    throw InvalidInput(os.str());
  }
}

}  // namespace densepack
