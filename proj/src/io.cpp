#include "densepack/io.hpp"

#include "densepack/errors.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace densepack::io {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << content;
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed ") + what + ": " + e.what());
  }
}

Shift shift_from_json(const json& j, int d) {
  auto v = j.get<std::vector<int>>();
  if (static_cast<int>(v.size()) != d) throw InvalidInput("shift has the wrong number of components");
  return Shift(std::move(v));
}

}  // namespace

json to_json(const Basis& b) { return json{{"d", b.dim()}, {"basis", b.rows()}}; }

Basis basis_from_json(const json& j) {
  return guarded("basis", [&] {
    const json& src = j.contains("config") ? j.at("config") : j;
    auto rows = src.at("basis").get<std::vector<std::vector<double>>>();
    if (src.contains("d") && src.at("d").get<int>() != static_cast<int>(rows.size())) {
      throw InvalidInput("\"d\" does not match the number of basis vectors");
    }
    return Basis::from_rows(rows);
  });
}

json to_json(const Configuration& c) {
  json centers = json::array();
  for (const auto& p : c.centers) centers.push_back(std::vector<double>(p.frac().data(), p.frac().data() + p.dim()));
  return json{{"d", c.dim()}, {"basis", c.basis.rows()}, {"centers", centers}, {"radius", c.radius}};
}

Configuration config_from_json(const json& j) {
  return guarded("configuration", [&] {
    const json& src = j.contains("config") ? j.at("config") : j;
    Basis b = basis_from_json(src);
    std::vector<TorusPoint> centers;
    for (const auto& c : src.at("centers")) {
      auto v = c.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != b.dim()) throw InvalidInput("center has the wrong number of coordinates");
      centers.emplace_back(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    const double r = src.at("radius").get<double>();
    if (!(r > 0.0)) throw InvalidInput("radius must be positive");
    return Configuration{std::move(b), std::move(centers), r};
  });
}

json to_json(const PeriodicGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back(
        json{{"k", e.k}, {"j", e.j}, {"shift", e.shift.values()}, {"gap", e.gap}, {"length", e.length}});
  }
  return json{{"n", g.size()}, {"edges", edges}};
}

PeriodicGraph graph_from_json(const json& j, int d) {
  return guarded("graph", [&] {
    const json& src = j.contains("graph") ? j.at("graph") : j;
    std::vector<PeriodicEdge> edges;
    for (const auto& e : src.at("edges")) {
      edges.push_back({e.at("k").get<int>(), e.at("j").get<int>(), shift_from_json(e.at("shift"), d),
                       e.value("gap", 0.0), e.value("length", 0.0), 0.0});
    }
    return PeriodicGraph(src.at("n").get<int>(), std::move(edges));
  });
}

json to_json(const GraphClass& c) {
  json adj = json::array();
  for (const auto& list : c.adjacency) {
    json row = json::array();
    for (const auto& nb : list) row.push_back(json{{"j", nb.j}, {"shift", nb.shift.values()}});
    adj.push_back(row);
  }
  return json{{"n", c.n}, {"d", c.d}, {"adjacency", adj}};
}

GraphClass class_from_json(const json& j) {
  return guarded("graph class", [&] {
    const json& src = j.contains("class") ? j.at("class") : j;
    GraphClass c;
    c.n = src.at("n").get<int>();
    c.d = src.value("d", 0);
    for (const auto& row : src.at("adjacency")) {
      std::vector<ClassNeighbor> list;
      for (const auto& nb : row) {
        auto s = nb.at("shift").get<std::vector<int>>();
        if (c.d == 0) c.d = static_cast<int>(s.size());
        list.push_back({nb.at("j").get<int>(), Shift(std::move(s))});
      }
      c.adjacency.push_back(std::move(list));
    }
    c.validate();
    return c;
  });
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  auto v = guarded("vector", [&] { return j.get<std::vector<double>>(); });
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const EnergyReport& r) {
  return json{{"xi", to_json(r.xi)},         {"amplitude", r.amplitude},
              {"sigma", number_or_null(r.sigma)}, {"t_opt", to_json(r.t_opt)},
              {"per_edge", r.per_edge},      {"iterations", r.iterations},
              {"bound", number_or_null(r.bound)}, {"equality_gap", number_or_null(r.equality_gap)}};
}

json to_json(const BoundReport& r) {
  return json{{"defined", r.defined},
              {"T", r.T},
              {"mean_arg", r.mean_arg},
              {"bound", number_or_null(r.bound)},
              {"energy", number_or_null(r.energy)},
              {"equality_gap", number_or_null(r.equality_gap)},
              {"equal_drop_edges_equal_gap", r.equal_drop_edges_equal_gap},
              {"support_edges", r.support_edges}};
}

json to_json(const PercolationReport& r) {
  return json{{"winding", r.winding},
              {"touching_edges", r.touching_edges},
              {"isotropy_necessary", r.isotropy_necessary},
              {"component", r.component},
              {"component_rank", r.component_rank}};
}

json to_json(const DensifyHint& h) {
  return json{{"component", h.component}, {"members", h.members}, {"translation", h.translation},
              {"from", h.from},           {"to", h.to}};
}

json to_json(const CenterSolution& s) {
  json centers = json::array();
  for (const auto& p : s.centers) centers.push_back(to_json(p.frac()));
  return json{{"coeffs", to_json(s.coeffs)}, {"centers", centers}, {"residual", s.residual}};
}

json to_json(const PackReport& r) {
  return json{{"config", to_json(r.config)},
              {"solution", to_json(r.solution)},
              {"density", r.density},
              {"radius", r.config.radius},
              {"class_violation", r.class_violation},
              {"class_signature", r.class_signature},
              {"realized_signature", r.realized_signature}};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (item.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse number '" + item + "' in list '" + s + "'");
    }
  }
  if (out.empty()) throw InvalidInput("empty number list");
  return out;
}

Eigen::VectorXd parse_vector(const std::string& s) {
  auto v = parse_list(s);
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace densepack::io
