#pragma once

// Canonical JSON reports. Hand-rolled writer so output is byte-stable across
// runs and platforms: object keys sorted (std::map), doubles printed with
// %.17g (shortest round-trip not needed, stability is), non-finite values as
// the strings "inf" / "-inf" / "nan". Identical inputs must produce identical
// bytes; nothing time- or locale-dependent goes through here.

#include <cinttypes>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gsconvex/algebra.hpp"
#include "gsconvex/check.hpp"
#include "gsconvex/gradineq.hpp"
#include "gsconvex/optim.hpp"
#include "gsconvex/parse.hpp"
#include "gsconvex/sets.hpp"

namespace gsconvex {

class Json;
using JsonArray = std::vector<Json>;
using JsonObject = std::map<std::string, Json>;

class Json {
 public:
  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(static_cast<std::int64_t>(i)) {}
  Json(long i) : v_(static_cast<std::int64_t>(i)) {}
  Json(long long i) : v_(static_cast<std::int64_t>(i)) {}
  Json(std::size_t i) : v_(static_cast<std::int64_t>(i)) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(JsonArray a) : v_(std::move(a)) {}
  Json(JsonObject o) : v_(std::move(o)) {}
  Json(const std::vector<double>& xs) {
    JsonArray a;
    a.reserve(xs.size());
    for (double x : xs) a.emplace_back(x);
    v_ = std::move(a);
  }

  void dump(std::string& out) const {
    struct V {
      std::string& out;
      void operator()(std::nullptr_t) const { out += "null"; }
      void operator()(bool b) const { out += b ? "true" : "false"; }
      void operator()(std::int64_t i) const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%" PRId64, i);
        out += buf;
      }
      void operator()(double d) const {
        if (std::isnan(d)) {
          out += "\"nan\"";
        } else if (std::isinf(d)) {
          out += d > 0 ? "\"inf\"" : "\"-inf\"";
        } else {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.17g", d);
          out += buf;
        }
      }
      void operator()(const std::string& s) const {
        out += '"';
        for (char c : s) {
          switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
              if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
              } else {
                out += c;
              }
          }
        }
        out += '"';
      }
      void operator()(const JsonArray& a) const {
        out += '[';
        bool first = true;
        for (const Json& j : a) {
          if (!first) out += ',';
          first = false;
          j.dump(out);
        }
        out += ']';
      }
      void operator()(const JsonObject& o) const {
        out += '{';
        bool first = true;
        for (const auto& [k, j] : o) {
          if (!first) out += ',';
          first = false;
          V{out}(k);
          out += ':';
          j.dump(out);
        }
        out += '}';
      }
    };
    std::visit(V{out}, v_);
  }

  std::string dump() const {
    std::string out;
    dump(out);
    return out;
  }

 private:
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, JsonArray, JsonObject> v_;
};

// --- serializers ------------------------------------------------------------

inline Json to_json(const Tolerance& t) {
  return JsonObject{{"abs", t.abs}, {"rel", t.rel}};
}

inline Json to_json(const Witness& w) {
  return JsonObject{{"b1", Json(w.b1)}, {"b2", Json(w.b2)}, {"sigma", w.sigma}};
}

inline Json to_json(const BoxDomain& d) {
  return JsonObject{{"lo", Json(d.lo)},
                    {"hi", Json(d.hi)},
                    {"truncation_bound", d.truncation_bound}};
}

inline Json to_json(const SamplePlan& p) {
  return JsonObject{{"n_pairs", Json(static_cast<long>(p.n_pairs))},
                    {"seed", Json(static_cast<long long>(p.seed))},
                    {"s", p.s},
                    {"sigma_grid", Json(p.sigma_grid)}};
}

inline Json to_json(const CheckReport& r) {
  JsonObject o{{"definition", r.definition},
               {"verdict", std::string(verdict_name(r.verdict))},
               {"worst_margin", r.worst_margin},
               {"n_evaluated", Json(r.n_evaluated)},
               {"n_domain_errors", Json(r.n_domain_errors)},
               {"s", r.s},
               {"strict", r.strict},
               {"tol", to_json(r.tol)},
               {"plan", to_json(r.plan)},
               {"domain", to_json(r.domain)}};
  if (r.has_witness) o["witness"] = to_json(r.witness);
  if (r.first_domain_error)
    o["first_domain_error"] = JsonObject{{"at", to_json(r.first_domain_error->at)},
                                         {"reason", r.first_domain_error->reason}};
  return o;
}

inline Json to_json(const CombineResult& r) {
  JsonObject o{{"h", to_string(r.h)},
               {"theta", to_string(r.theta.expr)},
               {"report", to_json(r.report)}};
  if (!r.notes.empty()) {
    JsonArray notes;
    for (const std::string& n : r.notes) notes.emplace_back(n);
    o["notes"] = std::move(notes);
  }
  return o;
}

inline Json to_json(const EquivalenceReport& r) {
  return JsonObject{{"function_check", to_json(r.function_report)},
                    {"set_check", to_json(r.set_report)},
                    {"agree", r.agree}};
}

inline Json to_json(const LimitEstimate& l) {
  return JsonObject{
      {"status", std::string(l.status == LimitEstimate::Status::converged ? "converged"
                                                                          : "divergent")},
      {"value", l.value},
      {"converged_at", Json(static_cast<long>(l.converged_at))}};
}

inline Json to_json(const GradIneqReport& r) {
  JsonArray ineqs;
  for (const IneqResult& q : r.inequalities) {
    JsonObject o{{"name", q.name},
                 {"worst_margin", q.worst.margin},
                 {"n_evaluated", Json(q.n_evaluated)},
                 {"hypotheses_met", q.hypotheses_met}};
    if (q.worst.has) o["witness"] = to_json(q.worst.witness);
    ineqs.emplace_back(std::move(o));
  }
  return JsonObject{
      {"inequalities", std::move(ineqs)},
      {"hypotheses",
       JsonObject{{"h_nonnegative_on_samples", r.flags.h_nonneg_on_samples},
                  {"h_negative_on_samples", r.flags.h_negative_on_samples},
                  {"theta_nonpositive_on_samples", r.flags.theta_nonpos_on_samples}}},
      {"n_domain_errors", Json(r.n_domain_errors)},
      {"n_divergent_limits", Json(r.n_divergent_limits)},
      {"gradient_fd_fallback", r.grad_flags.fd_fallback},
      {"gradient_one_sided_fallback", r.grad_flags.one_sided_fallback},
      {"s", r.s},
      {"tol", to_json(r.tol)}};
}

inline Json to_json(const MinCertReport& r) {
  JsonObject o{{"certified", r.certified},
               {"worst_margin", r.worst_margin},
               {"candidate", Json(r.candidate)},
               {"gradient_at_candidate", Json(r.gradient_at_candidate)},
               {"gradient_fd_fallback", r.grad_flags.fd_fallback},
               {"gradient_one_sided_fallback", r.grad_flags.one_sided_fallback},
               {"n_evaluated", Json(r.n_evaluated)},
               {"n_domain_errors", Json(r.n_domain_errors)},
               {"s", r.s},
               {"tol", to_json(r.tol)}};
  if (r.has_witness) o["witness"] = to_json(r.witness);
  return o;
}

inline Json to_json(const OracleResult& r) {
  JsonObject o{{"found", r.found},
               {"n_evaluated", Json(r.n_evaluated)},
               {"n_domain_errors", Json(r.n_domain_errors)},
               {"n_infeasible", Json(r.n_infeasible)}};
  if (r.found) {
    o["argmin"] = Json(r.argmin);
    o["value"] = r.value;
  }
  return o;
}

inline Json to_json(const KktReport& r) {
  JsonObject o{{"certified", r.certified},
               {"stationarity_residual", r.stationarity_residual},
               {"stationarity_ok", r.stationarity_ok},
               {"complementarity_residuals", Json(r.complementarity_residuals)},
               {"complementarity_ok", r.complementarity_ok},
               {"inequality_ok", r.inequality_ok},
               {"worst_margin", r.worst_margin},
               {"n_evaluated", Json(r.n_evaluated)},
               {"n_domain_errors", Json(r.n_domain_errors)},
               {"gradient_fd_fallback", r.grad_flags.fd_fallback},
               {"gradient_one_sided_fallback", r.grad_flags.one_sided_fallback},
               {"s", r.s},
               {"tol", to_json(r.tol)},
               {"conventions", JsonObject{{"value_term", r.value_term_convention},
                                          {"probe_points", r.probe_convention}}}};
  if (r.has_witness) o["witness"] = to_json(r.witness);
  return o;
}

inline Json to_json(const UniquenessReport& r) {
  JsonObject o{{"unique_on_grid", r.unique_on_grid},
               {"min_value", r.min_value},
               {"candidate_value", r.candidate_value},
               {"n_near_min", Json(r.n_near_min)},
               {"neighborhood_radius", r.neighborhood_radius}};
  if (r.has_second) o["second_minimizer"] = Json(r.second_minimizer);
  return o;
}

}  // namespace gsconvex
