#include "dilation/lab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "dilation/dilation.hpp"

namespace dilation::lab {

namespace {

/// Pass threshold for the doubly commuting and NS verdicts.
constexpr double verdict_tol = 1e-10;

struct Resolved {
  LatticePoint L;
  LatticePoint M;
  LatticePoint probes;
  int guard = 1;
  double tol = 1e-8;
};

Resolved resolve(const Instance& inst, const RunOptions& o) {
  Resolved r;
  const LatticePoint dflt = LatticePoint::constant(inst.k, 3);
  r.L = o.L ? *o.L : inst.parameters.L.value_or(dflt);
  r.M = o.M ? *o.M : inst.parameters.M.value_or(dflt);
  r.guard = o.guard.value_or(inst.parameters.guard);
  r.tol = o.tol.value_or(inst.parameters.tol);
  auto check_rank = [&](const LatticePoint& p) {
    if (p.k() != inst.k) throw Error(ErrorKind::schema, "lattice points need k = " + std::to_string(inst.k) + " coordinates");
  };
  check_rank(r.L);
  check_rank(r.M);
  if (o.probes)
    r.probes = *o.probes;
  else if (inst.parameters.probes)
    r.probes = *inst.parameters.probes;
  else
    r.probes = (r.M - LatticePoint::constant(inst.k, r.guard)).positive().min(r.L);
  check_rank(r.probes);
  if (r.guard < 0) throw Error(ErrorKind::schema, "guard must be nonnegative");
  if (!(r.tol >= 0)) throw Error(ErrorKind::schema, "tol must be nonnegative");
  return r;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ordered_json entries_json(const Report& r) {
  ordered_json out = ordered_json::array();
  for (const auto& e : r.entries) {
    ordered_json x;
    x["name"] = e.name;
    x["residual"] = number_or_null(e.value);
    x["tolerance"] = e.tolerance;
    x["pass"] = e.value <= e.tolerance;
    out.push_back(std::move(x));
  }
  return out;
}

struct Built {
  Instance instance;
  std::string digest;
  Report validation;
  std::shared_ptr<const CCRepresentation> rep;
  bool valid = false;
};

void record_failure(Built& b, const std::string& name, const Error& e) {
  b.validation.add(name, std::numeric_limits<double>::infinity(), 0.0);
  b.validation.warnings.push_back(name + ": " + e.what());
}

Built build(const json& j) {
  Built b;
  b.instance = instance_from_json(j);
  b.digest = canonical_digest(j);
  const Instance& inst = b.instance;
  bool ok = true;
  for (int i = 0; i < inst.k; ++i) {
    const Report r = validate_correspondence(inst.generators[static_cast<std::size_t>(i)]);
    b.validation.merge(r, "generator_" + std::to_string(i + 1) + ".");
    ok = ok && r.passed();
  }
  std::shared_ptr<const ProductSystem> system;
  if (ok) {
    try {
      system = make_product_system(inst.algebra, inst.generators, inst.flips);
      b.validation.merge(system->report());
      for (const auto& w : system->warnings()) b.validation.warnings.push_back(w);
    } catch (const Error& e) {
      record_failure(b, "product_system", e);
      ok = false;
    }
  }
  if (ok) {
    const Report s = validate_sigma(inst.algebra, inst.sigma);
    if (!s.passed()) {
      b.validation.merge(s);
      ok = false;
    }
  }
  if (ok) {
    try {
      b.rep = std::make_shared<const CCRepresentation>(system, inst.sigma, inst.T);
      const Report r = validate_representation(*b.rep);
      b.validation.merge(r);
      ok = r.passed();
    } catch (const Error& e) {
      record_failure(b, "representation", e);
      ok = false;
    }
  }
  b.valid = ok && b.validation.passed();
  return b;
}

ordered_json parameters_json(const Resolved& r) {
  ordered_json p;
  p["L"] = point_to_json(r.L);
  p["M"] = point_to_json(r.M);
  p["guard"] = r.guard;
  p["tol"] = r.tol;
  p["probes"] = point_to_json(r.probes);
  p["rank_rtol"] = DilationOptions{}.rank_rtol;
  p["factorization"] = "eigen";
  return p;
}

ordered_json verdicts_skeleton() {
  ordered_json v;
  for (const char* key : {"valid", "doubly_commuting", "satisfies_NS", "dilatable", "dilation_verified"}) v[key] = nullptr;
  return v;
}

ordered_json start_report(const char* command, const Built& b) {
  ordered_json r;
  r["command"] = command;
  r["instance"] = b.digest;
  return r;
}

void finish(ordered_json& r, const Built& b, std::chrono::steady_clock::time_point t0) {
  r["validation"] = entries_json(b.validation);
  ordered_json warnings = ordered_json::array();
  for (const auto& w : b.validation.warnings) warnings.push_back(w);
  r["warnings"] = std::move(warnings);
  r["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
}

/// Doubly commuting and NS verdicts over box(L).
void structural_verdicts(const Built& b, const Resolved& p, ordered_json& report, bool& dc) {
  const auto& rep = *b.rep;
  const double dc_res = rep.k() >= 2 ? doubly_commuting_residual(rep, p.L) : 0.0;
  dc = dc_res <= verdict_tol;
  const BrehmerSummary ns = brehmer_minimum(rep, p.L);
  ordered_json brehmer;
  brehmer["minimum"] = number_or_null(ns.minimum);
  ordered_json subset = ordered_json::array();
  for (int i = 0; i < rep.k(); ++i)
    if (ns.subset & (1u << i)) subset.push_back(i + 1);
  brehmer["subset"] = std::move(subset);
  brehmer["point"] = ns.point.k() ? ordered_json(point_to_json(ns.point)) : ordered_json(nullptr);
  report["doubly_commuting_residual"] = number_or_null(dc_res);
  report["brehmer"] = std::move(brehmer);
  report["verdicts"]["doubly_commuting"] = dc;
  report["verdicts"]["satisfies_NS"] = ns.minimum >= -verdict_tol;
}

template <class F>
Outcome guarded(F f) {
  try {
    return f();
  } catch (const Error& e) {
    Outcome o;
    o.exit = e.kind() == ErrorKind::schema ? exit_code::input_error : exit_code::invalid;
    o.report = nullptr;
    o.diagnostics.push_back(std::string(to_string(e.kind())) + ": " + e.what());
    return o;
  } catch (const std::exception& e) {
    Outcome o;
    o.exit = exit_code::input_error;
    o.report = nullptr;
    o.diagnostics.push_back(e.what());
    return o;
  }
}

void dump_bundle(const DilationBundle& b, const std::string& path) {
  json d;
  d["rank"] = b.rank();
  d["generated_rank"] = b.generated_rank();
  json kappa = json::object();
  for (const auto& s : b.window().points()) kappa[s.str()] = matrix_to_json(b.kappa(s));
  d["kappa"] = std::move(kappa);
  json gen = json::object();
  for (const auto& s : b.generating_points()) gen[s.str()] = matrix_to_json(b.generator_block(s));
  d["generators"] = std::move(gen);
  json v0 = json::array();
  for (const auto& m : b.V0_basis()) v0.push_back(matrix_to_json(m));
  d["V0"] = std::move(v0);
  json vs = json::object();
  const LatticePoint top = b.space().bound().min(b.window().bound());
  for (int i = 0; i < b.rep().k(); ++i) {
    const LatticePoint e = LatticePoint::unit(b.rep().k(), i);
    if (!e.leq(top)) continue;
    json list = json::array();
    for (const auto& m : b.Vs_basis(e)) list.push_back(matrix_to_json(m));
    vs[e.str()] = std::move(list);
  }
  d["V"] = std::move(vs);
  write_text(path, d.dump() + "\n");
}

}  // namespace

Outcome run_validate(const json& instance) {
  return guarded([&] {
    const auto t0 = std::chrono::steady_clock::now();
    const Built b = build(instance);
    Outcome o;
    o.report = start_report("validate", b);
    o.report["verdicts"] = verdicts_skeleton();
    o.report["verdicts"]["valid"] = b.valid;
    finish(o.report, b, t0);
    if (!b.valid) {
      o.exit = exit_code::invalid;
      for (const auto& e : b.validation.entries)
        if (!(e.value <= e.tolerance)) o.diagnostics.push_back("invalid: " + e.name + " residual " + std::to_string(e.value));
    }
    return o;
  });
}

Outcome run_check(const json& instance, const RunOptions& options) {
  return guarded([&] {
    const auto t0 = std::chrono::steady_clock::now();
    const Built b = build(instance);
    const Resolved p = resolve(b.instance, options);
    Outcome o;
    o.report = start_report("check", b);
    o.report["parameters"] = parameters_json(p);
    o.report["verdicts"] = verdicts_skeleton();
    o.report["verdicts"]["valid"] = b.valid;
    if (!b.valid) {
      finish(o.report, b, t0);
      o.exit = exit_code::invalid;
      o.diagnostics.push_back("instance is not valid");
      return o;
    }
    bool dc = false;
    structural_verdicts(b, p, o.report, dc);
    finish(o.report, b, t0);
    return o;
  });
}

Outcome run_dilate(const json& instance, const RunOptions& options) {
  return guarded([&] {
    const auto t0 = std::chrono::steady_clock::now();
    const Built b = build(instance);
    const Resolved p = resolve(b.instance, options);
    Outcome o;
    o.report = start_report("dilate", b);
    o.report["parameters"] = parameters_json(p);
    o.report["verdicts"] = verdicts_skeleton();
    o.report["verdicts"]["valid"] = b.valid;
    if (!b.valid) {
      finish(o.report, b, t0);
      o.exit = exit_code::invalid;
      o.diagnostics.push_back("instance is not valid");
      return o;
    }
    bool dc = false;
    structural_verdicts(b, p, o.report, dc);
    const bool pairs = b.rep->k() >= 2 && dc;

    auto space = std::make_shared<const TruncatedFock>(b.rep, p.L);
    Report checks;
    checks.add("hat_semigroup", hat_semigroup_residual(*space), 1e-10);
    checks.add("technology", technology_residual(*space), 1e-10);
    if (pairs) checks.add("doubly_commuting_hat", hat_doubly_commuting_residual(*space), 1e-10);

    const auto window = window_gram(space, p.M, options.threads);
    const bool dilatable = window->psd_margin() >= -p.tol;
    o.report["verdicts"]["dilatable"] = dilatable;
    ordered_json w;
    w["M"] = point_to_json(p.M);
    w["rank"] = nullptr;
    w["generated_rank"] = nullptr;
    w["psd_margin"] = window->psd_margin();
    if (!dilatable) {
      o.report["window"] = std::move(w);
      o.report["checks"] = entries_json(checks);
      o.report["verdicts"]["dilation_verified"] = false;
      finish(o.report, b, t0);
      o.exit = exit_code::not_dilatable;
      o.diagnostics.push_back("window Gram is not positive: margin " + std::to_string(window->psd_margin()));
      return o;
    }

    DilationOptions opts;
    opts.psd_tol = p.tol;
    opts.threads = options.threads;
    const auto bundle = kolmogorov(window, opts);
    w["rank"] = bundle->rank();
    w["generated_rank"] = bundle->generated_rank();
    o.report["window"] = std::move(w);

    checks.merge(verify_regular_dilation(*bundle, p.probes));
    checks.add("V_isometry", verify_V_isometry(*bundle, p.probes), 1e-8);
    checks.add("V_semigroup", verify_V_semigroup(*bundle, p.probes), 1e-8);
    checks.add("V0_star_hom", verify_V0_star_hom(*bundle), 1e-8);
    if (pairs) checks.add("doubly_commuting_V", doubly_commuting_V_residual(*bundle, p.guard), 1e-6);
    DilationOptions chol = opts;
    chol.method = Factorization::pivoted_cholesky;
    const auto other = kolmogorov(window, chol);
    checks.add("uniqueness", compare_minimal_dilations(*bundle, *other), 1e-9);

    o.report["checks"] = entries_json(checks);
    const bool verified = checks.passed();
    o.report["verdicts"]["dilation_verified"] = verified;
    if (!options.dump_path.empty()) dump_bundle(*bundle, options.dump_path);
    finish(o.report, b, t0);
    if (!verified) {
      o.exit = exit_code::check_failed;
      for (const auto& e : checks.entries)
        if (!(e.value <= e.tolerance)) o.diagnostics.push_back("check failed: " + e.name + " residual " + std::to_string(e.value));
    }
    return o;
  });
}

namespace {

std::optional<LatticePoint> point_field(const json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_array()) return std::nullopt;
  return LatticePoint(params.at(key).get<std::vector<int>>());
}

void compare_checks(const json& ref, const json& fresh, const char* list, std::vector<std::string>& diffs,
                    std::vector<std::string>& warns) {
  const json empty = json::array();
  const json& a = ref.contains(list) ? ref.at(list) : empty;
  const json& b = fresh.contains(list) ? fresh.at(list) : empty;
  std::map<std::string, json> fresh_by_name;
  for (const auto& e : b) fresh_by_name[e.at("name").get<std::string>()] = e;
  if (a.size() != b.size()) diffs.push_back(std::string(list) + ": check count differs");
  for (const auto& e : a) {
    const std::string name = e.at("name").get<std::string>();
    const auto it = fresh_by_name.find(name);
    if (it == fresh_by_name.end()) {
      diffs.push_back(std::string(list) + ": check " + name + " missing from the fresh run");
      continue;
    }
    const json& f = it->second;
    if (e.at("pass") != f.at("pass")) {
      diffs.push_back(name + ": pass changed from " + e.at("pass").dump() + " to " + f.at("pass").dump());
      continue;
    }
    const json& ra = e.at("residual");
    const json& rb = f.at("residual");
    if (ra.is_null() || rb.is_null()) {
      if (ra != rb) diffs.push_back(name + ": residual " + ra.dump() + " vs " + rb.dump());
      continue;
    }
    const double drift = std::abs(ra.get<double>() - rb.get<double>());
    const double tol = e.at("tolerance").get<double>();
    if (drift > 10 * tol)
      diffs.push_back(name + ": residual drift " + std::to_string(drift) + " beyond 10x tolerance");
    else if (drift > tol)
      warns.push_back(name + ": residual drift " + std::to_string(drift) + " within 10x tolerance");
  }
}

}  // namespace

Outcome run_verify(const json& instance, const json& reference, int threads) {
  return guarded([&] {
    if (!reference.is_object() || !reference.contains("command") || !reference.contains("verdicts"))
      throw Error(ErrorKind::schema, "reference is not a report");
    const std::string command = reference.at("command").get<std::string>();
    RunOptions opts;
    opts.threads = threads;
    if (reference.contains("parameters")) {
      const json& p = reference.at("parameters");
      opts.L = point_field(p, "L");
      opts.M = point_field(p, "M");
      opts.probes = point_field(p, "probes");
      if (p.contains("guard")) opts.guard = p.at("guard").get<int>();
      if (p.contains("tol")) opts.tol = p.at("tol").get<double>();
    }
    Outcome fresh;
    if (command == "validate")
      fresh = run_validate(instance);
    else if (command == "check")
      fresh = run_check(instance, opts);
    else if (command == "dilate")
      fresh = run_dilate(instance, opts);
    else
      throw Error(ErrorKind::schema, "reference command \"" + command + "\" is unknown");
    if (fresh.report.is_null()) return fresh;
    const json ref = reference;
    const json now = json::parse(fresh.report.dump());

    std::vector<std::string> diffs;
    std::vector<std::string> warns;
    if (ref.value("instance", std::string()) != now.value("instance", std::string()))
      diffs.push_back("instance digest differs");
    for (const auto& [key, value] : ref.at("verdicts").items()) {
      const json f = now.at("verdicts").contains(key) ? now.at("verdicts").at(key) : json(nullptr);
      if (value != f) diffs.push_back("verdict " + key + ": " + value.dump() + " vs " + f.dump());
    }
    if (ref.contains("window") && now.contains("window")) {
      const json& a = ref.at("window");
      const json& b = now.at("window");
      for (const char* key : {"rank", "generated_rank"})
        if (a.value(key, json(nullptr)) != b.value(key, json(nullptr))) diffs.push_back(std::string("window ") + key + " differs");
      const double tol = opts.tol.value_or(1e-8);
      const double drift = std::abs(a.at("psd_margin").get<double>() - b.at("psd_margin").get<double>());
      if (drift > 10 * tol)
        diffs.push_back("psd_margin drift " + std::to_string(drift));
      else if (drift > tol)
        warns.push_back("psd_margin drift " + std::to_string(drift) + " within 10x tolerance");
    } else if (ref.contains("window") != now.contains("window")) {
      diffs.push_back("window presence differs");
    }
    compare_checks(ref, now, "validation", diffs, warns);
    compare_checks(ref, now, "checks", diffs, warns);

    Outcome o;
    o.report = ordered_json::object();
    o.report["command"] = "verify";
    o.report["reference_command"] = command;
    o.report["match"] = diffs.empty();
    o.report["differences"] = diffs;
    o.report["warnings"] = warns;
    for (const auto& w : warns) o.diagnostics.push_back("warning: " + w);
    for (const auto& d : diffs) o.diagnostics.push_back("mismatch: " + d);
    o.exit = diffs.empty() ? exit_code::ok : exit_code::mismatch;
    return o;
  });
}

std::string report_without_timing(const ordered_json& report) {
  ordered_json copy = report;
  if (copy.is_object()) copy.erase("timing");
  return copy.dump(2);
}

}  // namespace dilation::lab
