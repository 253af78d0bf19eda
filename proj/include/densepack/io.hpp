#pragma once

// JSON serialization of configurations, graphs, classes and reports.

#include "densepack/analysis.hpp"
#include "densepack/energy.hpp"
#include "densepack/optimizer.hpp"

#include <json.hpp>

#include <string>

namespace densepack::io {

using nlohmann::json;

/// Reads and parses a JSON file; throws InvalidInput on I/O or syntax errors.
json read_json(const std::string& path);
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);
/// FNV-1a 64-bit digest as 16 hex digits.
std::string digest(const std::string& bytes);

json to_json(const Basis& b);
Basis basis_from_json(const json& j);

json to_json(const Configuration& c);
/// Accepts a bare configuration or an object with a "config" member.
Configuration config_from_json(const json& j);

json to_json(const PeriodicGraph& g);
PeriodicGraph graph_from_json(const json& j, int d);

json to_json(const GraphClass& c);
/// Accepts a bare class or an object with a "class" member.
GraphClass class_from_json(const json& j);

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_json(const json& j);

json to_json(const EnergyReport& r);
json to_json(const BoundReport& r);
json to_json(const PercolationReport& r);
json to_json(const DensifyHint& h);
json to_json(const CenterSolution& s);
json to_json(const PackReport& r);

/// Parses "0,1,0" into a vector.
Eigen::VectorXd parse_vector(const std::string& s);
std::vector<double> parse_list(const std::string& s);

}  // namespace densepack::io
