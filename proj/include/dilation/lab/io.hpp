#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilation/product_system.hpp"
#include "dilation/representation.hpp"

namespace dilation::lab {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Run parameters; unset boxes default to (3,...,3).
struct Parameters {
  std::optional<LatticePoint> L;
  std::optional<LatticePoint> M;
  int guard = 1;
  /// Window Gram margins above -tol count as positive.
  double tol = 1e-8;
  std::optional<LatticePoint> probes;
};

struct Instance {
  CStarAlgebra algebra{std::vector<int>{1}};
  int k = 0;
  std::vector<Correspondence> generators;
  /// Keys (i, j), i < j, zero-based; raw tensor coordinates.
  FlipMap flips;
  AlgebraRepresentation sigma;
  /// T[i][b] is the d x d image of basis vector b of E_i.
  std::vector<std::vector<Mat>> T;
  Parameters parameters;
};

Complex complex_from_json(const json& j);
json complex_to_json(Complex z);
Mat matrix_from_json(const json& j, Index rows, Index cols);
json matrix_to_json(const Mat& m);

/// Throws Error(schema) on any shape or type problem.
Instance instance_from_json(const json& j);
json instance_to_json(const Instance& instance, bool with_parameters = true);

/// Throws Error(schema) on unreadable or malformed files.
json read_json_file(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// SHA-256 hex digest of the canonical (key-sorted, compact) dump.
std::string canonical_digest(const json& j);

/// "3" broadcast to k coordinates, or "1,2,3".
LatticePoint parse_point(const std::string& text, int k);
json point_to_json(const LatticePoint& p);

}  // namespace dilation::lab
