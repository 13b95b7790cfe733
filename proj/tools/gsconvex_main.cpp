// Command-line front end. Every subcommand loads one JSON problem file,
// runs a library routine, prints a canonical JSON report on stdout, and maps
// the outcome to an exit code:
//   0  certified / agreement / oracle found a minimum
//   1  refuted / not certified (including infeasible or negative-multiplier
//      certificates)
//   2  inconclusive or an evaluation pathology (domain errors at the probe,
//      divergent limits, operands that fail certification)
//   3  usage or schema problems (bad flags, unreadable files, bad expressions)
// Diagnostics and wall time go to stderr so stdout stays byte-stable for
// identical inputs.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsconvex/gsconvex.hpp"

namespace {

using namespace gsconvex;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::certified_on_samples: return 0;
    case Verdict::refuted: return 1;
    case Verdict::inconclusive: return 2;
  }
  return 2;
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::infeasible:
    case Errc::negative_multiplier:
      return 1;
    case Errc::domain:
    case Errc::non_differentiable:
    case Errc::singular_gradient:
    case Errc::divergent_limit:
    case Errc::operand_not_certified:
      return 2;
    default:
      return 3;
  }
}

const nlohmann::json& section(const ProblemFile& pf, const char* name) {
  if (!pf.raw.contains(name) || !pf.raw.at(name).is_object())
    throw Error(Errc::schema, std::string(name) + ": required object section for this subcommand");
  return pf.raw.at(name);
}

std::string req_string(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw Error(Errc::schema, where + "." + key + ": required string");
  return j.at(key).get<std::string>();
}

std::vector<double> req_number_array(const nlohmann::json& j, const char* key,
                                     const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw Error(Errc::schema, where + "." + key + ": required array of numbers");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number())
      throw Error(Errc::schema, where + "." + key + ": entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> beta_offsets_of(const nlohmann::json& sec) {
  if (!sec.contains("beta_offsets")) return {0.0, 1.0};
  return req_number_array(sec, "beta_offsets", "sets");
}

struct Outcome {
  int code = 3;
  Json result;
  std::string human;
};

Outcome run_check(const ProblemFile& pf, bool strict_flag) {
  const nlohmann::json& sec = section(pf, "check");
  const std::string def = req_string(sec, "definition", "check");
  const Expr& f = pf.function(req_string(sec, "function", "check"));
  const bool strict = strict_flag || sec.value("strict", false);

  CheckReport rep;
  if (def == "general-s") {
    rep = check_general_s_convex(f, pf.map(req_string(sec, "map", "check")), pf.domain, pf.plan,
                                 pf.tol, strict);
  } else if (def == "s-second") {
    rep = check_s_convex_second_sense(f, pf.domain, pf.plan, pf.tol, strict);
  } else if (def == "sub-b") {
    rep = check_sub_b_convex(f, pf.map(req_string(sec, "map", "check")), pf.domain, pf.plan,
                             pf.tol);
  } else if (def == "sub-b-s") {
    rep = check_sub_b_s_convex(f, pf.map(req_string(sec, "map", "check")), pf.domain, pf.plan,
                               pf.tol, strict);
  } else {
    throw Error(Errc::schema, "check.definition: unknown definition \"" + def + "\"");
  }
  return {verdict_exit(rep.verdict), to_json(rep),
          def + ": " + verdict_name(rep.verdict) + " worst_margin=" + fmt_g(rep.worst_margin) +
              " evaluated=" + std::to_string(rep.n_evaluated)};
}

Outcome run_sets(const ProblemFile& pf) {
  const nlohmann::json& sec = section(pf, "sets");
  const std::string mode = req_string(sec, "mode", "sets");
  const std::vector<double> offsets = beta_offsets_of(sec);

  if (mode == "epigraph-equivalence") {
    const Expr& f = pf.function(req_string(sec, "function", "sets"));
    const ModifierMap& theta = pf.map(req_string(sec, "map", "sets"));
    EquivalenceReport rep = epigraph_equivalence(f, theta, pf.domain, pf.plan, pf.tol, offsets);
    int code;
    if (rep.function_report.verdict == Verdict::inconclusive ||
        rep.set_report.verdict == Verdict::inconclusive)
      code = 2;
    else
      code = rep.agree ? 0 : 1;
    return {code, to_json(rep),
            std::string("epigraph-equivalence: agree=") + (rep.agree ? "yes" : "no") +
                " function=" + verdict_name(rep.function_report.verdict) +
                " set=" + verdict_name(rep.set_report.verdict)};
  }

  if (!sec.contains("functions") || !sec.at("functions").is_array() || sec.at("functions").empty())
    throw Error(Errc::schema, "sets.functions: required non-empty array of function names");
  const ModifierMap& theta = pf.map(req_string(sec, "map", "sets"));

  CheckReport rep;
  if (mode == "set-check") {
    SetSpec spec{{}, theta, pf.plan.s};
    for (const auto& name : sec.at("functions"))
      spec.components.push_back(pf.function(name.get<std::string>()));
    rep = set_check(spec, pf.domain, pf.plan, offsets, pf.tol);
  } else if (mode == "intersect") {
    std::vector<SetSpec> specs;
    for (const auto& name : sec.at("functions"))
      specs.push_back(SetSpec{{pf.function(name.get<std::string>())}, theta, pf.plan.s});
    rep = intersect_check(specs, pf.domain, pf.plan, pf.tol, offsets);
  } else {
    throw Error(Errc::schema, "sets.mode: unknown mode \"" + mode + "\"");
  }
  return {verdict_exit(rep.verdict), to_json(rep),
          mode + ": " + verdict_name(rep.verdict) + " worst_margin=" + fmt_g(rep.worst_margin)};
}

Outcome run_algebra(const ProblemFile& pf) {
  const nlohmann::json& sec = section(pf, "algebra");
  const std::string op = req_string(sec, "operation", "algebra");
  if (!sec.contains("operands") || !sec.at("operands").is_array() || sec.at("operands").empty())
    throw Error(Errc::schema, "algebra.operands: required non-empty array of {function, map}");

  std::vector<CertifiedInstance> ops;
  for (const auto& item : sec.at("operands")) {
    if (!item.is_object()) throw Error(Errc::schema, "algebra.operands: entries must be objects");
    const Expr& f = pf.function(req_string(item, "function", "algebra.operands"));
    const ModifierMap& theta = pf.map(req_string(item, "map", "algebra.operands"));
    ops.push_back(certify_instance(f, theta, pf.domain, pf.plan, pf.tol));
  }

  CombineResult cr;
  if (op == "sum") {
    if (ops.size() != 2) throw Error(Errc::schema, "algebra: sum takes exactly two operands");
    cr = combine_sum(ops[0], ops[1]);
  } else if (op == "scale") {
    if (ops.size() != 1) throw Error(Errc::schema, "algebra: scale takes exactly one operand");
    if (!sec.contains("alpha") || !sec.at("alpha").is_number())
      throw Error(Errc::schema, "algebra.alpha: required number");
    cr = combine_scale(ops[0], sec.at("alpha").get<double>());
  } else if (op == "weighted-sum") {
    cr = combine_weighted_sum(ops, req_number_array(sec, "alphas", "algebra"));
  } else if (op == "max") {
    cr = combine_max(ops);
  } else if (op == "composition") {
    if (ops.size() != 1)
      throw Error(Errc::schema, "algebra: composition takes exactly one operand");
    if (!sec.contains("slope") || !sec.at("slope").is_number())
      throw Error(Errc::schema, "algebra.slope: required number");
    cr = combine_composition(ops[0], sec.at("slope").get<double>(),
                             sec.value("intercept", 0.0));
  } else if (op == "sup") {
    cr = combine_sup(ops);
  } else {
    throw Error(Errc::schema, "algebra.operation: unknown operation \"" + op + "\"");
  }
  return {verdict_exit(cr.report.verdict), to_json(cr),
          op + ": " + verdict_name(cr.report.verdict) +
              " worst_margin=" + fmt_g(cr.report.worst_margin)};
}

Outcome run_gradineq(const ProblemFile& pf) {
  const nlohmann::json& sec = section(pf, "gradineq");
  const Expr& f = pf.function(req_string(sec, "function", "gradineq"));
  const ModifierMap& theta = pf.map(req_string(sec, "map", "gradineq"));
  const std::string which = sec.value("which", std::string("bounds"));

  GradIneqReport rep;
  if (which == "bounds")
    rep = check_gradient_bounds(f, theta, pf.domain, pf.plan, pf.tol);
  else if (which == "nonpos-map")
    rep = check_gradient_bound_nonpos_map(f, theta, pf.domain, pf.plan, pf.tol);
  else if (which == "gap")
    rep = check_gradient_gap_bounds(f, theta, pf.domain, pf.plan, pf.tol);
  else
    throw Error(Errc::schema, "gradineq.which: unknown selector \"" + which + "\"");

  bool violated = false, informative = false;
  for (const IneqResult& q : rep.inequalities) {
    if (!q.hypotheses_met) continue;
    if (q.n_evaluated > 0 && q.worst.has) {
      informative = true;
      if (q.worst.margin < -rep.tol.slack(std::fabs(q.worst.margin))) violated = true;
    }
  }
  int code = violated ? 1 : informative ? 0 : 2;
  std::string human = "gradineq " + which + ": " +
                      (violated ? "violated" : informative ? "holds on samples" : "inconclusive");
  for (const IneqResult& q : rep.inequalities)
    if (q.worst.has)
      human += " " + q.name + "=" + fmt_g(q.worst.margin) +
               (q.hypotheses_met ? "" : " (hypotheses not met)");
  return {code, to_json(rep), human};
}

Outcome run_certify_min(const ProblemFile& pf) {
  const nlohmann::json& sec = section(pf, "certify_min");
  const Expr& f = pf.function(req_string(sec, "function", "certify_min"));
  const ModifierMap& theta = pf.map(req_string(sec, "map", "certify_min"));
  std::vector<double> candidate = req_number_array(sec, "candidate", "certify_min");
  if (static_cast<int>(candidate.size()) != pf.arity)
    throw Error(Errc::schema, "certify_min.candidate: needs one coordinate per variable");

  UnconstrainedProblem p{f, theta, pf.domain, pf.plan};
  MinCertReport rep = certify_unconstrained(p, candidate, pf.tol);
  Json result = to_json(rep);
  if (sec.contains("uniqueness_grid")) {
    if (!sec.at("uniqueness_grid").is_number_integer())
      throw Error(Errc::schema, "certify_min.uniqueness_grid: expected an integer");
    UniquenessReport u = check_uniqueness(p, candidate, sec.at("uniqueness_grid").get<int>());
    JsonObject wrap{{"certificate", std::move(result)}, {"uniqueness", to_json(u)}};
    result = Json(std::move(wrap));
  }
  return {rep.certified ? 0 : 1, std::move(result),
          std::string("certify-min: ") + (rep.certified ? "CERTIFIED" : "NOT_CERTIFIED") +
              " worst_margin=" + fmt_g(rep.worst_margin)};
}

Outcome run_kkt(const ProblemFile& pf) {
  const nlohmann::json& sec = section(pf, "kkt");
  if (!sec.contains("objective") || !sec.at("objective").is_object())
    throw Error(Errc::schema, "kkt.objective: required {function, map} object");
  const Expr& f = pf.function(req_string(sec.at("objective"), "function", "kkt.objective"));
  const ModifierMap& theta = pf.map(req_string(sec.at("objective"), "map", "kkt.objective"));

  ConstrainedProblem p{f, theta, {}, {}, pf.domain, pf.plan};
  if (sec.contains("constraints")) {
    if (!sec.at("constraints").is_array())
      throw Error(Errc::schema, "kkt.constraints: expected an array");
    for (const auto& item : sec.at("constraints")) {
      if (!item.is_object())
        throw Error(Errc::schema, "kkt.constraints: entries must be {function, map} objects");
      p.constraints.push_back(pf.function(req_string(item, "function", "kkt.constraints")));
      p.constraint_maps.push_back(
          item.contains("map") ? pf.map(req_string(item, "map", "kkt.constraints")) : theta);
    }
  }
  KktCertificate cert{req_number_array(sec, "candidate", "kkt"),
                      req_number_array(sec, "multipliers", "kkt")};
  KktReport rep = certify_kkt(p, cert, pf.tol);
  return {rep.certified ? 0 : 1, to_json(rep),
          std::string("kkt: ") + (rep.certified ? "CERTIFIED" : "NOT_CERTIFIED") +
              " stationarity=" + fmt_g(rep.stationarity_residual) +
              " worst_margin=" + fmt_g(rep.worst_margin)};
}

Outcome run_oracle_min(const ProblemFile& pf) {
  const nlohmann::json& sec = section(pf, "oracle_min");
  const Expr& f = pf.function(req_string(sec, "function", "oracle_min"));
  int grid_n = 1001;
  if (sec.contains("grid_n")) {
    if (!sec.at("grid_n").is_number_integer())
      throw Error(Errc::schema, "oracle_min.grid_n: expected an integer");
    grid_n = sec.at("grid_n").get<int>();
  }
  std::vector<Expr> cons;
  if (sec.contains("constraints")) {
    if (!sec.at("constraints").is_array())
      throw Error(Errc::schema, "oracle_min.constraints: expected an array of function names");
    for (const auto& name : sec.at("constraints"))
      cons.push_back(pf.function(name.get<std::string>()));
  }
  OracleResult res = brute_force_min(f, pf.domain, grid_n, cons.empty() ? nullptr : &cons,
                                     pf.tol.abs);
  std::string human = "oracle-min: ";
  if (res.found) {
    human += "value=" + fmt_g(res.value) + " at=[";
    for (std::size_t i = 0; i < res.argmin.size(); ++i)
      human += (i ? "," : "") + fmt_g(res.argmin[i]);
    human += "]";
  } else {
    human += "no feasible point on the grid";
  }
  return {res.found ? 0 : 2, to_json(res), human};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sampled certification toolkit for generalized s-convexity"};
  app.require_subcommand(1);

  std::string file;
  double tol_override = 0.0;
  long long seed_override = 0;
  int pairs_override = 0;
  double truncate_override = 0.0;
  bool strict = false, no_json = false, quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "problem file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--tol", tol_override, "override absolute and relative tolerance");
    sub->add_option("--seed", seed_override, "override the sampling seed");
    sub->add_option("--pairs", pairs_override, "override the number of sampled pairs");
    sub->add_option("--truncate", truncate_override, "override the domain truncation bound");
    sub->add_flag("--strict", strict, "require strict inequality at interior sigma");
    sub->add_flag("--no-json", no_json, "print a one-line summary instead of JSON");
    sub->add_flag("--quiet", quiet, "suppress stderr diagnostics");
    return sub;
  };
  add_common(app.add_subcommand("check", "check one convexity definition on sampled pairs"));
  add_common(app.add_subcommand("sets", "set-level checks and epigraph equivalence"));
  add_common(app.add_subcommand("algebra", "combine certified instances and re-check"));
  add_common(app.add_subcommand("gradineq", "sampled gradient inequality margins"));
  add_common(app.add_subcommand("certify-min", "certify a candidate minimizer"));
  add_common(app.add_subcommand("kkt", "check a constrained optimality certificate"));
  add_common(app.add_subcommand("oracle-min", "brute-force grid minimization"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  const auto t0 = std::chrono::steady_clock::now();

  int code = 3;
  try {
    std::ifstream in(file);
    if (!in) throw Error(Errc::usage, "cannot open " + file);
    std::stringstream buf;
    buf << in.rdbuf();
    ProblemFile pf = load_problem_text(buf.str());

    if (sub->count("--tol")) {
      pf.tol.abs = tol_override;
      pf.tol.rel = tol_override;
    }
    if (sub->count("--seed")) pf.plan.seed = static_cast<std::uint64_t>(seed_override);
    if (sub->count("--pairs")) pf.plan.n_pairs = pairs_override;
    if (sub->count("--truncate")) pf.domain.truncation_bound = truncate_override;
    pf.domain.validate();
    pf.plan.validate();

    Outcome out;
    if (cmd == "check")
      out = run_check(pf, strict);
    else if (cmd == "sets")
      out = run_sets(pf);
    else if (cmd == "algebra")
      out = run_algebra(pf);
    else if (cmd == "gradineq")
      out = run_gradineq(pf);
    else if (cmd == "certify-min")
      out = run_certify_min(pf);
    else if (cmd == "kkt")
      out = run_kkt(pf);
    else
      out = run_oracle_min(pf);
    code = out.code;

    if (no_json) {
      std::cout << out.human << "\n";
    } else {
      JsonObject doc{{"tool", "gsconvex"},
                     {"version", version_string},
                     {"command", cmd},
                     {"exit_code", code},
                     {"result", std::move(out.result)}};
      std::cout << Json(std::move(doc)).dump() << "\n";
    }
    if (!quiet) std::cerr << out.human << "\n";
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    if (no_json) {
      std::cout << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    } else {
      JsonObject doc{{"tool", "gsconvex"},
                     {"version", version_string},
                     {"command", cmd},
                     {"exit_code", code},
                     {"error", JsonObject{{"code", errc_name(e.code())},
                                          {"message", std::string(e.what())}}}};
      std::cout << Json(std::move(doc)).dump() << "\n";
    }
    if (!quiet) std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
  } catch (const std::exception& e) {
    code = 3;
    if (!quiet) std::cerr << "error: " << e.what() << "\n";
  }

  if (!quiet) {
    const auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    std::cerr << "wall_time_ms=" << dt.count() << "\n";
  }
  return code;
}
