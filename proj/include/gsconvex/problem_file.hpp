#pragma once

// Problem-file loader. A problem file is a JSON document naming expressions,
// modifier maps, the box domain, and the sampling plan, plus per-subcommand
// sections the CLI reads. Parsing is strict: unknown kinds, wrong types, and
// dangling names all raise Errc::schema with the offending key in the message.

#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsconvex/check.hpp"
#include "gsconvex/parse.hpp"

namespace gsconvex {

struct ProblemFile {
  int schema_version = 1;
  int arity = 1;
  BoxDomain domain;
  SamplePlan plan;
  Tolerance tol;
  std::map<std::string, Expr> functions;
  std::map<std::string, ModifierMap> maps;
  nlohmann::json raw;  // subcommand sections are read lazily from here

  const Expr& function(const std::string& name) const {
    auto it = functions.find(name);
    if (it == functions.end())
      throw Error(Errc::schema, "problem file does not define function '" + name + "'");
    return it->second;
  }
  const ModifierMap& map(const std::string& name) const {
    auto it = maps.find(name);
    if (it == maps.end())
      throw Error(Errc::schema, "problem file does not define map '" + name + "'");
    return it->second;
  }
};

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& where, const std::string& what) {
  throw Error(Errc::schema, where + ": " + what);
}

inline double bound_value(const nlohmann::json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    schema_fail(where, "string bounds must be \"inf\" or \"-inf\", got \"" + s + "\"");
  }
  schema_fail(where, "expected a number or \"inf\"/\"-inf\"");
}

inline std::vector<double> bound_array(const nlohmann::json& j, int arity,
                                       const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array");
  if (static_cast<int>(j.size()) != arity)
    schema_fail(where, "expected " + std::to_string(arity) + " entries, got " +
                           std::to_string(j.size()));
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(bound_value(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline Expr parse_named(const std::string& text, int arity, const std::string& where) {
  try {
    return parse(text, arity);
  } catch (const Error& e) {
    schema_fail(where, std::string(e.what()));
  }
}

}  // namespace detail

inline ProblemFile load_problem(const nlohmann::json& j) {
  using detail::schema_fail;
  if (!j.is_object()) schema_fail("$", "problem file must be a JSON object");

  ProblemFile pf;
  pf.raw = j;

  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    schema_fail("schema_version", "required integer");
  pf.schema_version = j["schema_version"].get<int>();
  if (pf.schema_version != 1)
    schema_fail("schema_version", "unsupported version " + std::to_string(pf.schema_version));

  if (!j.contains("arity") || !j["arity"].is_number_integer())
    schema_fail("arity", "required integer");
  pf.arity = j["arity"].get<int>();
  if (pf.arity < 1 || pf.arity > 16) schema_fail("arity", "must be between 1 and 16");

  if (!j.contains("domain") || !j["domain"].is_object())
    schema_fail("domain", "required object with lo/hi");
  const nlohmann::json& dom = j["domain"];
  pf.domain.lo = detail::bound_array(dom.contains("lo") ? dom["lo"] : nlohmann::json(),
                                     pf.arity, "domain.lo");
  pf.domain.hi = detail::bound_array(dom.contains("hi") ? dom["hi"] : nlohmann::json(),
                                     pf.arity, "domain.hi");
  if (dom.contains("truncation")) {
    if (!dom["truncation"].is_number()) schema_fail("domain.truncation", "expected a number");
    pf.domain.truncation_bound = dom["truncation"].get<double>();
  }

  if (j.contains("s")) {
    if (!j["s"].is_number()) schema_fail("s", "expected a number");
    pf.plan.s = j["s"].get<double>();
  }

  if (j.contains("plan")) {
    const nlohmann::json& plan = j["plan"];
    if (!plan.is_object()) schema_fail("plan", "expected an object");
    if (plan.contains("pairs")) {
      if (!plan["pairs"].is_number_integer()) schema_fail("plan.pairs", "expected an integer");
      pf.plan.n_pairs = plan["pairs"].get<int>();
    }
    if (plan.contains("seed")) {
      if (!plan["seed"].is_number_integer()) schema_fail("plan.seed", "expected an integer");
      pf.plan.seed = plan["seed"].get<std::uint64_t>();
    }
    if (plan.contains("sigma_grid")) {
      if (!plan["sigma_grid"].is_array()) schema_fail("plan.sigma_grid", "expected an array");
      std::vector<double> grid;
      for (const auto& g : plan["sigma_grid"]) {
        if (!g.is_number()) schema_fail("plan.sigma_grid", "entries must be numbers");
        grid.push_back(g.get<double>());
      }
      pf.plan.sigma_grid = std::move(grid);
    }
    if (plan.contains("tol_abs")) {
      if (!plan["tol_abs"].is_number()) schema_fail("plan.tol_abs", "expected a number");
      pf.tol.abs = plan["tol_abs"].get<double>();
    }
    if (plan.contains("tol_rel")) {
      if (!plan["tol_rel"].is_number()) schema_fail("plan.tol_rel", "expected a number");
      pf.tol.rel = plan["tol_rel"].get<double>();
    }
  }

  if (j.contains("functions")) {
    if (!j["functions"].is_object()) schema_fail("functions", "expected an object");
    for (const auto& [name, val] : j["functions"].items()) {
      if (!val.is_string()) schema_fail("functions." + name, "expected an expression string");
      pf.functions.emplace(
          name, detail::parse_named(val.get<std::string>(), pf.arity, "functions." + name));
    }
  }

  if (j.contains("maps")) {
    if (!j["maps"].is_object()) schema_fail("maps", "expected an object");
    for (const auto& [name, val] : j["maps"].items()) {
      const std::string where = "maps." + name;
      if (val.is_string()) {  // shorthand: one-point map
        pf.maps.emplace(name, ModifierMap{detail::parse_named(val.get<std::string>(), pf.arity,
                                                              where),
                                          MapKind::one_point});
        continue;
      }
      if (!val.is_object() || !val.contains("expr") || !val["expr"].is_string())
        schema_fail(where, "expected an expression string or {expr, kind}");
      MapKind kind = MapKind::one_point;
      if (val.contains("kind")) {
        const std::string k = val["kind"].get<std::string>();
        if (k == "one-point")
          kind = MapKind::one_point;
        else if (k == "two-point")
          kind = MapKind::two_point;
        else
          schema_fail(where + ".kind", "must be \"one-point\" or \"two-point\", got \"" + k + "\"");
      }
      const int map_arity = kind == MapKind::two_point ? 2 * pf.arity : pf.arity;
      pf.maps.emplace(name, ModifierMap{detail::parse_named(val["expr"].get<std::string>(),
                                                            map_arity, where + ".expr"),
                                        kind});
    }
  }

  try {
    pf.domain.validate();
    pf.plan.validate();
  } catch (const Error& e) {
    schema_fail("domain/plan", std::string(e.what()));
  }
  return pf;
}

inline ProblemFile load_problem_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) detail::schema_fail("$", "not valid JSON");
  return load_problem(j);
}

}  // namespace gsconvex
