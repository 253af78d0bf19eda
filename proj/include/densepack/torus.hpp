#pragma once

// Geometry of the periodicity cell: a parallelotope spanned by d basis
// vectors with opposite faces glued, so points live on a flat torus.

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace densepack {

/// Integer lattice offset sum_l s_l * nu_l, stored by its coefficients.
class Shift {
 public:
  Shift() = default;
  explicit Shift(int d) : s_(static_cast<std::size_t>(d), 0) {}
  explicit Shift(std::vector<int> s) : s_(std::move(s)) {}
  Shift(std::initializer_list<int> s) : s_(s) {}

  int dim() const { return static_cast<int>(s_.size()); }
  int operator[](int l) const { return s_[static_cast<std::size_t>(l)]; }
  int& operator[](int l) { return s_[static_cast<std::size_t>(l)]; }
  const std::vector<int>& values() const { return s_; }

  bool is_zero() const;
  /// First nonzero component is positive.
  bool lex_positive() const;

  Shift operator-() const;
  Shift operator+(const Shift& o) const;
  Shift operator-(const Shift& o) const;
  auto operator<=>(const Shift&) const = default;
  bool operator==(const Shift&) const = default;

 private:
  std::vector<int> s_;
};

/// All shifts in {-w..w}^d in lexicographic order.
std::vector<Shift> enumerate_shifts(int d, int w);

/// Fundamental translation vectors. Immutable; validated on construction.
///
/// Construction rejects singular bases and bases so skewed that the
/// {-1,0,1}^d image window no longer finds minimal images: the lattice
/// Voronoi cell must fit inside [-1,1]^d in fractional coordinates.
class Basis {
 public:
  /// Columns of `columns` are nu_1..nu_d.
  explicit Basis(const Eigen::MatrixXd& columns);
  /// Row-per-vector form, as stored in JSON.
  static Basis from_rows(const std::vector<std::vector<double>>& rows);
  static Basis identity(int d, double side = 1.0);

  int dim() const { return static_cast<int>(matrix_.cols()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  Eigen::VectorXd vector(int l) const { return matrix_.col(l); }
  double volume() const { return volume_; }
  /// Largest |fractional coordinate| attained on the lattice Voronoi cell, per axis.
  const Eigen::VectorXd& voronoi_extent() const { return extent_; }
  /// Upper bound on the circumradius of the lattice Voronoi cell.
  double cell_radius_bound() const;

  Eigen::VectorXd to_cartesian(const Eigen::VectorXd& frac) const { return matrix_ * frac; }
  Eigen::VectorXd to_fractional(const Eigen::VectorXd& x) const { return inverse_ * x; }
  Eigen::VectorXd offset(const Shift& s) const;
  Basis scaled(double c) const { return Basis(matrix_ * c); }
  std::vector<std::vector<double>> rows() const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd inverse_;
  double volume_ = 0.0;
  Eigen::VectorXd extent_;
};

/// Point on the torus in fractional coordinates, canonicalized to [0,1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(const Eigen::VectorXd& frac);
  TorusPoint(std::initializer_list<double> frac);

  int dim() const { return static_cast<int>(frac_.size()); }
  const Eigen::VectorXd& frac() const { return frac_; }
  Eigen::VectorXd cartesian(const Basis& basis) const { return basis.to_cartesian(frac_); }
  TorusPoint translated(const Eigen::VectorXd& dfrac) const { return TorusPoint(frac_ + dfrac); }

 private:
  Eigen::VectorXd frac_;
};

struct TorusDistance {
  double dist = 0.0;
  /// Minimizing m in |a - b + sum m_l nu_l|, i.e. the image of b sits at b - m.
  Shift shift;
};

/// Minimal-image distance over the {-1,0,1}^d window. Ties go to the
/// lexicographically smallest shift.
TorusDistance torus_distance(const Basis& basis, const TorusPoint& a, const TorusPoint& b);

double cell_volume(const Basis& basis);

/// Length of the shortest nonzero lattice vector.
double shortest_lattice_vector(const Basis& basis);

/// n equal balls on the torus.
struct Configuration {
  Basis basis;
  std::vector<TorusPoint> centers;
  double radius = 0.0;

  int dim() const { return basis.dim(); }
  int size() const { return static_cast<int>(centers.size()); }
};

struct ClosestPair {
  int k = -1;
  int j = -1;
  double dist = 0.0;
};

/// Closest pair of distinct centers, or a center and its own image (k == j).
ClosestPair closest_pair(const Configuration& config);

/// Throws InvalidInput naming the first pair closer than 2r (relative slack `tol`).
void check_non_overlapping(const Configuration& config, double tol = 1e-12);

}  // namespace densepack
