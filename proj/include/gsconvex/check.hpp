#pragma once

// Sampled certification of the four convexity-style inequalities. Each checker
// walks pair x sigma samples, computes margin = RHS - LHS, and reduces to a
// worst case with a lexicographic tie-break so the result is independent of
// evaluation order. Domain errors never vanish silently: they are counted and
// force INCONCLUSIVE unless an outright violation was found.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsconvex/expr.hpp"
#include "gsconvex/sampling.hpp"

namespace gsconvex {

enum class MapKind {
  one_point,  // expr over (b, sigma), arity m
  two_point,  // expr over (b1, b2, sigma), arity 2m: x1..xm = b1, x(m+1)..x(2m) = b2
};

struct ModifierMap {
  Expr expr;
  MapKind kind = MapKind::one_point;
};

inline bool modifier_maps_equal(const ModifierMap& a, const ModifierMap& b) {
  return a.kind == b.kind && structural_equal(a.expr, b.expr);
}

enum class Verdict { certified_on_samples, refuted, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified_on_samples: return "CERTIFIED_ON_SAMPLES";
    case Verdict::refuted: return "REFUTED";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  // Slack allowed below zero for the margin at a sample whose RHS has the
  // given magnitude.
  double slack(double rhs) const { return abs + rel * std::fabs(rhs); }
};

struct Witness {
  std::vector<double> b1, b2;
  double sigma = 0.0;
};

inline bool lex_less(const Witness& a, const Witness& b) {
  if (a.b1 != b.b1) return a.b1 < b.b1;
  if (a.b2 != b.b2) return a.b2 < b.b2;
  return a.sigma < b.sigma;
}

// Order-independent worst-case fold: smallest margin wins, ties go to the
// lexicographically smallest witness.
struct WorstCase {
  bool has = false;
  double margin = 0.0;
  Witness witness;

  void update(double m, const Witness& w) {
    if (!has || m < margin || (m == margin && lex_less(w, witness))) {
      has = true;
      margin = m;
      witness = w;
    }
  }
};

struct DomainErrorNote {
  Witness at;
  std::string reason;
};

struct CheckReport {
  std::string definition;  // which inequality was sampled
  Verdict verdict = Verdict::inconclusive;
  double worst_margin = 0.0;
  bool has_witness = false;
  Witness witness;
  long n_evaluated = 0;
  long n_domain_errors = 0;
  std::optional<DomainErrorNote> first_domain_error;
  // echoed configuration
  double s = 1.0;
  Tolerance tol;
  bool strict = false;
  SamplePlan plan;
  BoxDomain domain;
};

namespace detail {

struct SampleValue {
  double margin;
  double rhs;
};

inline std::vector<double> combine_point(const PointPair& p, double sigma) {
  std::vector<double> c(p.b1.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = sigma * p.b1[i] + (1.0 - sigma) * p.b2[i];
  return c;
}

inline std::vector<double> midpoint(const PointPair& p) {
  std::vector<double> c(p.b1.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (p.b1[i] + p.b2[i]);
  return c;
}

inline std::vector<double> concat(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c;
  c.reserve(a.size() + b.size());
  c.insert(c.end(), a.begin(), a.end());
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

inline void require_map_kind(const ModifierMap& m, MapKind k, const char* who) {
  if (m.kind != k)
    throw Error(Errc::wrong_map_kind,
                std::string(who) + (k == MapKind::one_point ? " needs a one-point modifier map"
                                                            : " needs a two-point modifier map"));
}

// Shared sampling loop. sample(pair, sigma) either returns {margin, rhs} or
// throws Error(Errc::domain).
template <typename SampleFn>
CheckReport run_check(std::string definition, const BoxDomain& d, const SamplePlan& plan,
                      Tolerance tol, bool strict, SampleFn&& sample) {
  CheckReport rep;
  rep.definition = std::move(definition);
  rep.s = plan.s;
  rep.tol = tol;
  rep.strict = strict;
  rep.plan = plan;
  rep.domain = d;

  WorstCase overall;
  WorstCase violating;
  const std::vector<PointPair> pairs = sample_pairs(d, plan);
  for (const PointPair& pr : pairs) {
    for (double sigma : plan.sigma_grid) {
      Witness w{pr.b1, pr.b2, sigma};
      try {
        SampleValue v = sample(pr, sigma);
        ++rep.n_evaluated;
        overall.update(v.margin, w);
        const bool interior = sigma > 0.0 && sigma < 1.0;
        const bool violated = (strict && interior) ? v.margin <= 0.0
                                                   : v.margin < -tol.slack(v.rhs);
        if (violated) violating.update(v.margin, w);
      } catch (const Error& err) {
        if (err.code() != Errc::domain) throw;
        ++rep.n_domain_errors;
        if (!rep.first_domain_error) rep.first_domain_error = DomainErrorNote{w, err.what()};
      }
    }
  }

  if (violating.has) {
    rep.verdict = Verdict::refuted;
    rep.worst_margin = violating.margin;
    rep.witness = violating.witness;
    rep.has_witness = true;
  } else {
    rep.verdict = rep.n_domain_errors > 0 ? Verdict::inconclusive : Verdict::certified_on_samples;
    if (overall.has) {
      rep.worst_margin = overall.margin;
      rep.witness = overall.witness;
      rep.has_witness = true;
    }
  }
  return rep;
}

}  // namespace detail

// --- single-sample margins (also the re-validation hooks for witnesses) --------

// h(sigma b1 + (1-sigma) b2) <= sigma^s [h(b1)+theta(b1,sigma)]
//                             + (1-sigma)^s [h(b2)+theta(b2,sigma)]
//                             + theta((b1+b2)/2, sigma)
inline double general_s_margin(const Expr& h, const ModifierMap& theta, double s,
                               const std::vector<double>& b1, const std::vector<double>& b2,
                               double sigma) {
  detail::require_map_kind(theta, MapKind::one_point, "general s-convexity check");
  PointPair pr{b1, b2};
  double hb1 = eval(h, b1);
  double hb2 = eval(h, b2);
  double t1 = eval(theta.expr, b1, sigma);
  double t2 = eval(theta.expr, b2, sigma);
  double tm = eval(theta.expr, detail::midpoint(pr), sigma);
  double lhs = eval(h, detail::combine_point(pr, sigma));
  double rhs = std::pow(sigma, s) * (hb1 + t1) + std::pow(1.0 - sigma, s) * (hb2 + t2) + tm;
  return rhs - lhs;
}

// h(sigma b1 + (1-sigma) b2) <= sigma^s h(b1) + (1-sigma)^s h(b2)
inline double s_second_margin(const Expr& h, double s, const std::vector<double>& b1,
                              const std::vector<double>& b2, double sigma) {
  PointPair pr{b1, b2};
  double rhs = std::pow(sigma, s) * eval(h, b1) + std::pow(1.0 - sigma, s) * eval(h, b2);
  return rhs - eval(h, detail::combine_point(pr, sigma));
}

// h(sigma b1 + (1-sigma) b2) <= sigma h(b1) + (1-sigma) h(b2) + bmap(b1,b2,sigma)
inline double sub_b_margin(const Expr& h, const ModifierMap& bmap, const std::vector<double>& b1,
                           const std::vector<double>& b2, double sigma) {
  detail::require_map_kind(bmap, MapKind::two_point, "sub-b convexity check");
  PointPair pr{b1, b2};
  double rhs = sigma * eval(h, b1) + (1.0 - sigma) * eval(h, b2) +
               eval(bmap.expr, detail::concat(b1, b2), sigma);
  return rhs - eval(h, detail::combine_point(pr, sigma));
}

// h(sigma b1 + (1-sigma) b2) <= sigma^s h(b1) + (1-sigma)^s h(b2) + bmap(b1,b2,sigma)
inline double sub_b_s_margin(const Expr& h, const ModifierMap& bmap, double s,
                             const std::vector<double>& b1, const std::vector<double>& b2,
                             double sigma) {
  detail::require_map_kind(bmap, MapKind::two_point, "sub-b s-convexity check");
  PointPair pr{b1, b2};
  double rhs = std::pow(sigma, s) * eval(h, b1) + std::pow(1.0 - sigma, s) * eval(h, b2) +
               eval(bmap.expr, detail::concat(b1, b2), sigma);
  return rhs - eval(h, detail::combine_point(pr, sigma));
}

// --- the four checkers ----------------------------------------------------------

// strict is an extension point (default matches the non-strict inequality);
// the uniqueness analysis uses it to test strict general s-convexity.
inline CheckReport check_general_s_convex(const Expr& h, const ModifierMap& theta,
                                          const BoxDomain& d, const SamplePlan& plan,
                                          Tolerance tol = {}, bool strict = false) {
  detail::require_map_kind(theta, MapKind::one_point, "check_general_s_convex");
  const double s = plan.s;
  return detail::run_check("general-s", d, plan, tol, strict,
                           [&](const PointPair& pr, double sigma) -> detail::SampleValue {
                             double hb1 = eval(h, pr.b1);
                             double hb2 = eval(h, pr.b2);
                             double t1 = eval(theta.expr, pr.b1, sigma);
                             double t2 = eval(theta.expr, pr.b2, sigma);
                             double tm = eval(theta.expr, detail::midpoint(pr), sigma);
                             double lhs = eval(h, detail::combine_point(pr, sigma));
                             double rhs = std::pow(sigma, s) * (hb1 + t1) +
                                          std::pow(1.0 - sigma, s) * (hb2 + t2) + tm;
                             return {rhs - lhs, rhs};
                           });
}

inline CheckReport check_s_convex_second_sense(const Expr& h, const BoxDomain& d,
                                               const SamplePlan& plan, Tolerance tol = {},
                                               bool strict = false) {
  const double s = plan.s;
  return detail::run_check("s-second", d, plan, tol, strict,
                           [&](const PointPair& pr, double sigma) -> detail::SampleValue {
                             double rhs = std::pow(sigma, s) * eval(h, pr.b1) +
                                          std::pow(1.0 - sigma, s) * eval(h, pr.b2);
                             double lhs = eval(h, detail::combine_point(pr, sigma));
                             return {rhs - lhs, rhs};
                           });
}

inline CheckReport check_sub_b_convex(const Expr& h, const ModifierMap& bmap, const BoxDomain& d,
                                      const SamplePlan& plan, Tolerance tol = {}) {
  detail::require_map_kind(bmap, MapKind::two_point, "check_sub_b_convex");
  return detail::run_check("sub-b", d, plan, tol, /*strict=*/false,
                           [&](const PointPair& pr, double sigma) -> detail::SampleValue {
                             double rhs = sigma * eval(h, pr.b1) +
                                          (1.0 - sigma) * eval(h, pr.b2) +
                                          eval(bmap.expr, detail::concat(pr.b1, pr.b2), sigma);
                             double lhs = eval(h, detail::combine_point(pr, sigma));
                             return {rhs - lhs, rhs};
                           });
}

inline CheckReport check_sub_b_s_convex(const Expr& h, const ModifierMap& bmap, const BoxDomain& d,
                                        const SamplePlan& plan, Tolerance tol = {},
                                        bool strict = false) {
  detail::require_map_kind(bmap, MapKind::two_point, "check_sub_b_s_convex");
  const double s = plan.s;
  return detail::run_check("sub-b-s", d, plan, tol, strict,
                           [&](const PointPair& pr, double sigma) -> detail::SampleValue {
                             double rhs = std::pow(sigma, s) * eval(h, pr.b1) +
                                          std::pow(1.0 - sigma, s) * eval(h, pr.b2) +
                                          eval(bmap.expr, detail::concat(pr.b1, pr.b2), sigma);
                             double lhs = eval(h, detail::combine_point(pr, sigma));
                             return {rhs - lhs, rhs};
                           });
}

// Lifts a one-point map into the two-point form whose sub-b-s check reproduces
// the general s-convexity right-hand side exactly:
//   b(b1,b2,sigma) = sigma^s theta(b1,sigma) + (1-sigma)^s theta(b2,sigma)
//                  + theta((b1+b2)/2, sigma)
inline ModifierMap lift_to_two_point(const ModifierMap& theta, int arity, double s) {
  detail::require_map_kind(theta, MapKind::one_point, "lift_to_two_point");
  auto at_b1 = theta.expr;
  auto at_b2 = substitute_vars(theta.expr, [&](int i) { return var(i + arity); });
  auto at_mid = substitute_vars(theta.expr, [&](int i) {
    return mul(constant(0.5), add(var(i), var(i + arity)));
  });
  Expr w1 = pow(sigma_ref(), constant(s));
  Expr w2 = pow(sub(constant(1.0), sigma_ref()), constant(s));
  return ModifierMap{add(add(mul(w1, at_b1), mul(w2, at_b2)), at_mid), MapKind::two_point};
}

}  // namespace gsconvex
