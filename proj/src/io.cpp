#include "dilation/lab/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace dilation::lab {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::schema, what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) schema(where + ": missing \"" + key + "\"");
  return j.at(key);
}

int int_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) schema(where + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

LatticePoint point_from_json(const json& j, int k, const std::string& where) {
  if (j.is_number_integer()) return LatticePoint::constant(k, j.get<int>());
  if (!j.is_array() || static_cast<int>(j.size()) != k) schema(where + ": expected an integer or a list of " + std::to_string(k));
  LatticePoint p(k);
  for (int i = 0; i < k; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number_integer()) schema(where + ": entries must be integers");
    p[i] = j[static_cast<std::size_t>(i)].get<int>();
  }
  if (!p.nonnegative()) schema(where + ": entries must be nonnegative");
  return p;
}

Vec element_from_json(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    schema(where + ": algebra element needs " + std::to_string(dim) + " coordinates");
  Vec v(dim);
  for (int p = 0; p < dim; ++p) v(p) = complex_from_json(j[static_cast<std::size_t>(p)]);
  return v;
}

json element_to_json(const Vec& v) {
  json out = json::array();
  for (Index p = 0; p < v.size(); ++p) out.push_back(complex_to_json(v(p)));
  return out;
}

std::vector<Mat> matrix_list(const json& j, std::size_t count, Index rows, Index cols, const std::string& where) {
  if (!j.is_array() || j.size() != count) schema(where + ": expected " + std::to_string(count) + " matrices");
  std::vector<Mat> out;
  for (std::size_t p = 0; p < count; ++p) {
    try {
      out.push_back(matrix_from_json(j[p], rows, cols));
    } catch (const Error& e) {
      schema(where + "[" + std::to_string(p) + "]: " + e.what());
    }
  }
  return out;
}

json matrix_list_to_json(const std::vector<Mat>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

}  // namespace

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  schema("complex numbers are [re, im]");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Mat matrix_from_json(const json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    schema("expected a " + std::to_string(rows) + " x " + std::to_string(cols) + " matrix");
  Mat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      schema("expected a " + std::to_string(rows) + " x " + std::to_string(cols) + " matrix");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json matrix_to_json(const Mat& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) schema("instance must be a JSON object");
  Instance inst;
  const json& alg = field(j, "algebra", "instance");
  const json& blocks = field(alg, "blocks", "algebra");
  if (!blocks.is_array() || blocks.empty()) schema("algebra.blocks must be a nonempty list");
  std::vector<int> sizes;
  for (const auto& b : blocks) {
    if (!b.is_number_integer() || b.get<int>() < 1) schema("algebra.blocks entries must be positive integers");
    sizes.push_back(b.get<int>());
  }
  inst.algebra = CStarAlgebra(sizes);
  const int D = inst.algebra.dim();

  inst.k = int_field(j, "k", "instance");
  if (inst.k < 1) schema("k must be positive");
  const json& gens = field(j, "generators", "instance");
  if (!gens.is_array() || static_cast<int>(gens.size()) != inst.k) schema("generators must list k correspondences");
  for (int i = 0; i < inst.k; ++i) {
    const std::string where = "generators[" + std::to_string(i) + "]";
    const json& g = gens[static_cast<std::size_t>(i)];
    Correspondence e;
    e.algebra = inst.algebra;
    e.dim = int_field(g, "dim", where);
    if (e.dim < 1) schema(where + ": dim must be positive");
    const json& gram = field(g, "gram", where);
    if (!gram.is_array() || static_cast<int>(gram.size()) != e.dim) schema(where + ": gram must have dim rows");
    for (int r = 0; r < e.dim; ++r) {
      const json& row = gram[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != e.dim) schema(where + ": gram must be dim x dim");
      for (int c = 0; c < e.dim; ++c)
        e.gram.push_back(element_from_json(row[static_cast<std::size_t>(c)], D, where + ".gram"));
    }
    e.right_action = matrix_list(field(g, "right_action", where), static_cast<std::size_t>(D), e.dim, e.dim, where + ".right_action");
    e.left_action = matrix_list(field(g, "left_action", where), static_cast<std::size_t>(D), e.dim, e.dim, where + ".left_action");
    inst.generators.push_back(std::move(e));
  }

  const json flips = j.contains("flips") ? j.at("flips") : json::object();
  if (!flips.is_object()) schema("flips must be an object keyed \"i,j\"");
  for (const auto& [key, value] : flips.items()) {
    int a = 0;
    int b = 0;
    char comma = 0;
    std::istringstream in(key);
    if (!(in >> a >> comma >> b) || comma != ',' || !in.eof()) schema("flip key \"" + key + "\" is not \"i,j\"");
    if (a < 1 || b < 1 || a > inst.k || b > inst.k || a >= b) schema("flip key \"" + key + "\" needs 1 <= i < j <= k");
    const Index n = static_cast<Index>(inst.generators[static_cast<std::size_t>(a - 1)].dim) *
                    inst.generators[static_cast<std::size_t>(b - 1)].dim;
    try {
      inst.flips[{a - 1, b - 1}] = matrix_from_json(value, n, n);
    } catch (const Error& e) {
      schema("flip " + key + ": " + e.what());
    }
  }
  for (int a = 0; a < inst.k; ++a)
    for (int b = a + 1; b < inst.k; ++b)
      if (!inst.flips.count({a, b})) schema("missing flip \"" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "\"");

  const json& rep = field(j, "representation", "instance");
  const int d = int_field(rep, "H_dim", "representation");
  if (d < 1) schema("representation.H_dim must be positive");
  inst.sigma.dim = d;
  inst.sigma.images = matrix_list(field(rep, "sigma", "representation"), static_cast<std::size_t>(D), d, d, "representation.sigma");
  const json& T = field(rep, "T", "representation");
  if (!T.is_array() || static_cast<int>(T.size()) != inst.k) schema("representation.T must list k generators");
  for (int i = 0; i < inst.k; ++i)
    inst.T.push_back(matrix_list(T[static_cast<std::size_t>(i)], static_cast<std::size_t>(inst.generators[static_cast<std::size_t>(i)].dim), d, d,
                                 "representation.T[" + std::to_string(i) + "]"));

  if (j.contains("parameters")) {
    const json& p = j.at("parameters");
    if (!p.is_object()) schema("parameters must be an object");
    if (p.contains("L")) inst.parameters.L = point_from_json(p.at("L"), inst.k, "parameters.L");
    if (p.contains("M")) inst.parameters.M = point_from_json(p.at("M"), inst.k, "parameters.M");
    if (p.contains("probes")) inst.parameters.probes = point_from_json(p.at("probes"), inst.k, "parameters.probes");
    if (p.contains("guard")) {
      if (!p.at("guard").is_number_integer() || p.at("guard").get<int>() < 0) schema("parameters.guard must be a nonnegative integer");
      inst.parameters.guard = p.at("guard").get<int>();
    }
    if (p.contains("tol")) {
      if (!p.at("tol").is_number() || p.at("tol").get<double>() < 0) schema("parameters.tol must be a nonnegative number");
      inst.parameters.tol = p.at("tol").get<double>();
    }
  }
  return inst;
}

json instance_to_json(const Instance& inst, bool with_parameters) {
  json j;
  j["algebra"] = {{"blocks", inst.algebra.blocks()}};
  j["k"] = inst.k;
  json gens = json::array();
  for (const auto& e : inst.generators) {
    json g;
    g["dim"] = e.dim;
    json gram = json::array();
    for (int r = 0; r < e.dim; ++r) {
      json row = json::array();
      for (int c = 0; c < e.dim; ++c) row.push_back(element_to_json(e.inner(r, c)));
      gram.push_back(std::move(row));
    }
    g["gram"] = std::move(gram);
    g["right_action"] = matrix_list_to_json(e.right_action);
    g["left_action"] = matrix_list_to_json(e.left_action);
    gens.push_back(std::move(g));
  }
  j["generators"] = std::move(gens);
  json flips = json::object();
  for (const auto& [key, m] : inst.flips) flips[std::to_string(key.first + 1) + "," + std::to_string(key.second + 1)] = matrix_to_json(m);
  j["flips"] = std::move(flips);
  json T = json::array();
  for (const auto& maps : inst.T) T.push_back(matrix_list_to_json(maps));
  j["representation"] = {{"H_dim", inst.sigma.dim}, {"sigma", matrix_list_to_json(inst.sigma.images)}, {"T", std::move(T)}};
  if (with_parameters) {
    json p = json::object();
    if (inst.parameters.L) p["L"] = point_to_json(*inst.parameters.L);
    if (inst.parameters.M) p["M"] = point_to_json(*inst.parameters.M);
    if (inst.parameters.probes) p["probes"] = point_to_json(*inst.parameters.probes);
    p["guard"] = inst.parameters.guard;
    p["tol"] = inst.parameters.tol;
    j["parameters"] = std::move(p);
  }
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    schema(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) schema("cannot write " + path);
  out << text;
  if (!out) schema("write to " + path + " failed");
}

std::string canonical_digest(const json& j) {
  const std::string text = j.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) schema("SHA-256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

LatticePoint parse_point(const std::string& text, int k) {
  std::vector<int> values;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      schema("bad lattice point \"" + text + "\"");
    }
    if (used != item.size() || v < 0) schema("bad lattice point \"" + text + "\"");
    values.push_back(v);
  }
  if (values.size() == 1) return LatticePoint::constant(k, values[0]);
  if (static_cast<int>(values.size()) != k) schema("lattice point \"" + text + "\" needs 1 or k coordinates");
  LatticePoint p(k);
  for (int i = 0; i < k; ++i) p[i] = values[static_cast<std::size_t>(i)];
  return p;
}

json point_to_json(const LatticePoint& p) {
  json out = json::array();
  for (int i = 0; i < p.k(); ++i) out.push_back(p[i]);
  return out;
}

}  // namespace dilation::lab
