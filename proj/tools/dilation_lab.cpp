// dilation-lab <validate|check|dilate|gen|verify> [flags]
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dilation/lab/families.hpp"
#include "dilation/lab/pipeline.hpp"

namespace {

using namespace dilation;
using namespace dilation::lab;

struct Flags {
  std::string input;
  std::string L;
  std::string M;
  std::string probes;
  int guard = -1;
  double tol = -1;
  std::string out;
  std::string dump;
  std::string report;
  std::string family;
  std::uint64_t seed = 0;
  int k = 2;
  std::string dims;
};

int emit(const Outcome& o, const std::string& out) {
  for (const auto& line : o.diagnostics) std::cerr << line << "\n";
  if (o.report.is_null()) return o.exit;
  const std::string text = o.report.dump(2) + "\n";
  try {
    if (out.empty())
      std::cout << text;
    else
      write_text(out, text);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code::input_error;
  }
  return o.exit;
}

/// Lattice flags need k, which only the instance knows.
RunOptions options_for(const Flags& f, const json& instance) {
  RunOptions o;
  const int k = instance.is_object() && instance.contains("k") && instance.at("k").is_number_integer() ? instance.at("k").get<int>() : 0;
  if (k < 1 && (!f.L.empty() || !f.M.empty() || !f.probes.empty())) throw Error(ErrorKind::schema, "instance has no valid k");
  if (!f.L.empty()) o.L = parse_point(f.L, k);
  if (!f.M.empty()) o.M = parse_point(f.M, k);
  if (!f.probes.empty()) o.probes = parse_point(f.probes, k);
  if (f.guard >= 0) o.guard = f.guard;
  if (f.tol >= 0) o.tol = f.tol;
  o.dump_path = f.dump;
  return o;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad --dims");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical dilations of completely contractive representations of product systems over N^k"};
  app.require_subcommand(1);
  Flags f;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--L", f.L, "truncation box: one integer or a comma list");
    cmd->add_option("--M", f.M, "dilation window: one integer or a comma list");
    cmd->add_option("--probes", f.probes, "probe box for the dilation checks");
    cmd->add_option("--guard", f.guard, "guard margin for adjoint checks")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tol", f.tol, "window Gram positivity tolerance")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", f.out, "write the report here instead of stdout");
  };

  auto* validate = app.add_subcommand("validate", "validate an instance");
  validate->add_option("instance", f.input)->required();
  validate->add_option("--out", f.out, "write the report here instead of stdout");

  auto* check = app.add_subcommand("check", "doubly commuting and NS checks");
  check->add_option("instance", f.input)->required();
  add_run_flags(check);

  auto* dilate = app.add_subcommand("dilate", "build and verify the regular isometric dilation");
  dilate->add_option("instance", f.input)->required();
  add_run_flags(dilate);
  dilate->add_option("--dump", f.dump, "write bundle matrices to this JSON file");

  auto* gen = app.add_subcommand("gen", "generate an instance from a family");
  gen->add_option("--family", f.family, "instance family")->required();
  gen->add_option("--seed", f.seed, "random seed");
  gen->add_option("--k", f.k, "number of generators");
  gen->add_option("--dims", f.dims, "d or d,m_1,...,m_k");
  gen->add_option("--out", f.out, "write the instance here instead of stdout");

  auto* verify = app.add_subcommand("verify", "rerun and compare against a reference report");
  verify->add_option("instance", f.input)->required();
  verify->add_option("--report", f.report, "reference report")->required();
  verify->add_option("--out", f.out, "write the comparison here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code::input_error;
  }

  try {
    if (gen->parsed()) {
      FamilyRequest r;
      r.family = f.family;
      r.seed = f.seed;
      r.k = f.k;
      r.dims = parse_dims(f.dims);
      const Instance inst = generate_instance(r);
      Outcome o;
      o.report = ordered_json::parse(instance_to_json(inst, false).dump());
      return emit(o, f.out);
    }
    const json instance = read_json_file(f.input);
    if (validate->parsed()) return emit(run_validate(instance), f.out);
    if (check->parsed()) return emit(run_check(instance, options_for(f, instance)), f.out);
    if (dilate->parsed()) return emit(run_dilate(instance, options_for(f, instance)), f.out);
    if (verify->parsed()) return emit(run_verify(instance, read_json_file(f.report)), f.out);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return exit_code::input_error;
  }
  return exit_code::input_error;
}
