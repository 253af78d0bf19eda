#include "densepack/lattices.hpp"

#include "densepack/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace densepack {

std::string to_string(Family f) {
  switch (f) {
    case Family::Z: return "zd";
    case Family::A2: return "a2";
    case Family::FCC: return "fcc";
    case Family::HCP: return "hcp";
  }
  return "unknown";
}

Family parse_family(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "zd" || l == "z" || l == "z_d") return Family::Z;
  if (l == "a2") return Family::A2;
  if (l == "fcc") return Family::FCC;
  if (l == "hcp") return Family::HCP;
  throw InvalidInput("unknown lattice family '" + s + "' (expected zd, a2, fcc or hcp)");
}

namespace {

const double kFccSide = std::numbers::sqrt2;
const double kHcpHeight = 2.0 * std::sqrt(2.0 / 3.0);

int lattice_dim(const LatticeSpec& spec) {
  switch (spec.family) {
    case Family::Z: return spec.d;
    case Family::A2: return 2;
    default: return 3;
  }
}

void check_spec(const LatticeSpec& spec) {
  if (spec.m < 1) throw InvalidInput("lattice repetition m must be >= 1");
  if (spec.family == Family::Z && (spec.d < 1 || spec.d > 6)) throw InvalidInput("Z_d needs 1 <= d <= 6");
  if (spec.family == Family::A2 && spec.d != 2) throw InvalidInput("A2 is planar: d must be 2");
  if ((spec.family == Family::FCC || spec.family == Family::HCP) && spec.d != 3) {
    throw InvalidInput(to_string(spec.family) + " needs d = 3");
  }
}

}  // namespace

LatticeData generate(const LatticeSpec& spec) {
  check_spec(spec);
  const int d = lattice_dim(spec);
  const double m = spec.m;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
  std::vector<Eigen::VectorXd> motif;  // fractional positions inside one unit cell
  switch (spec.family) {
    case Family::Z:
      B = Eigen::MatrixXd::Identity(d, d) * m;
      motif.push_back(Eigen::VectorXd::Zero(d));
      break;
    case Family::A2:
      B << m, 0.5 * m, 0.0, 0.5 * std::sqrt(3.0) * m;
      motif.push_back(Eigen::VectorXd::Zero(2));
      break;
    case Family::FCC:
      B = Eigen::MatrixXd::Identity(3, 3) * (m * kFccSide);
      motif.push_back(Eigen::Vector3d(0.0, 0.0, 0.0));
      motif.push_back(Eigen::Vector3d(0.5, 0.5, 0.0));
      motif.push_back(Eigen::Vector3d(0.5, 0.0, 0.5));
      motif.push_back(Eigen::Vector3d(0.0, 0.5, 0.5));
      break;
    case Family::HCP:
      B << m, 0.5 * m, 0.0, 0.0, 0.5 * std::sqrt(3.0) * m, 0.0, 0.0, 0.0, m * kHcpHeight;
      motif.push_back(Eigen::Vector3d(0.0, 0.0, 0.0));
      motif.push_back(Eigen::Vector3d(1.0 / 3.0, 1.0 / 3.0, 0.5));
      break;
  }
  std::vector<TorusPoint> centers;
  // Unit cells indexed lexicographically.
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    for (const auto& mo : motif) {
      Eigen::VectorXd f(d);
      for (int l = 0; l < d; ++l) f(l) = (idx[static_cast<std::size_t>(l)] + mo(l)) / m;
      centers.emplace_back(f);
    }
    int l = d - 1;
    while (l >= 0 && idx[static_cast<std::size_t>(l)] == spec.m - 1) idx[static_cast<std::size_t>(l--)] = 0;
    if (l < 0) break;
    ++idx[static_cast<std::size_t>(l)];
  }
  LatticeData out{Configuration{Basis(B), std::move(centers), 0.5}, {}, {}, 0.5};
  out.graph = build_delaunay(out.config);
  out.cls = class_from_graph(out.graph);
  out.cls.d = d;
  return out;
}

PotentialField layered_potential(const LatticeSpec& spec, const Configuration& config) {
  check_spec(spec);
  const int d = config.dim();
  const int n = config.size();
  PotentialField field{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(n), 1.0};
  double spacing = 1.0;
  switch (spec.family) {
    case Family::Z:
      field.xi(d - 1) = 1.0;
      break;
    case Family::A2:
      field.xi(1) = 1.0;
      spacing = 0.5 * std::sqrt(3.0);
      break;
    case Family::FCC:
      field.xi = Eigen::Vector3d(1.0, 1.0, 1.0) / std::sqrt(3.0);
      spacing = kFccSide / std::sqrt(3.0);
      break;
    case Family::HCP:
      field.xi(2) = 1.0;
      spacing = 0.5 * kHcpHeight;
      break;
  }
  field.amplitude = 1.0 / spacing;
  for (int k = 0; k < n; ++k) {
    const double h = field.xi.dot(config.centers[static_cast<std::size_t>(k)].cartesian(config.basis));
    field.t(k) = std::round(h / spacing);
  }
  field.t.array() -= field.t.mean();
  return field;
}

}  // namespace densepack
