#pragma once

// Closure constructors: build new candidate instances from certified ones
// (sums, scalings, weighted sums, pointwise max/sup, affine post-composition)
// and re-run the checker on the result. The re-check verdict is always carried
// in the result instead of being assumed, so the empirical story stays honest
// even where a construction is only conjectured to preserve the class.

#include <string>
#include <utility>
#include <vector>

#include "gsconvex/check.hpp"

namespace gsconvex {

struct CertifiedInstance {
  Expr h;
  ModifierMap theta;
  double s = 1.0;
  BoxDomain domain;
  SamplePlan plan;
  Tolerance tol;
  CheckReport report;  // invariant: verdict == certified_on_samples
};

// Runs the general s-convexity check and packages the instance; throws
// Error(Errc::operand_not_certified) when the check does not certify.
inline CertifiedInstance certify_instance(Expr h, ModifierMap theta, BoxDomain domain,
                                          SamplePlan plan, Tolerance tol = {}) {
  CheckReport rep = check_general_s_convex(h, theta, domain, plan, tol);
  if (rep.verdict != Verdict::certified_on_samples)
    throw Error(Errc::operand_not_certified,
                std::string("operand failed certification: ") + verdict_name(rep.verdict));
  return CertifiedInstance{std::move(h), std::move(theta), plan.s,
                           std::move(domain), std::move(plan), tol, std::move(rep)};
}

struct CombineResult {
  Expr h;
  ModifierMap theta;
  CheckReport report;               // re-check of the combined instance
  std::vector<std::string> notes;   // constructor-specific disclosures
};

namespace detail {

inline void require_compatible(const CertifiedInstance& a, const CertifiedInstance& b) {
  if (a.s != b.s) throw Error(Errc::mismatched_s, "operands use different s exponents");
  if (a.domain.lo != b.domain.lo || a.domain.hi != b.domain.hi ||
      a.domain.truncation_bound != b.domain.truncation_bound)
    throw Error(Errc::mismatched_domain, "operands use different domains");
}

inline CombineResult recheck(Expr h, ModifierMap theta, const CertifiedInstance& like,
                             std::vector<std::string> notes) {
  CheckReport rep = check_general_s_convex(h, theta, like.domain, like.plan, like.tol);
  return CombineResult{std::move(h), std::move(theta), std::move(rep), std::move(notes)};
}

}  // namespace detail

// Sum of two certified instances. The combined modifier map is the sum of the
// operand maps; a shared single map would not reproduce both operands' slack,
// so the summed map is what gets checked, and the note says so.
inline CombineResult combine_sum(const CertifiedInstance& a, const CertifiedInstance& b) {
  detail::require_compatible(a, b);
  return detail::recheck(add(a.h, b.h),
                         ModifierMap{add(a.theta.expr, b.theta.expr), MapKind::one_point}, a,
                         {"combined modifier map is the sum of the operand maps"});
}

// alpha * instance for alpha >= 0. alpha = 1 returns the operand trees
// untouched; alpha = 0 collapses to the zero function with the zero map.
inline CombineResult combine_scale(const CertifiedInstance& a, double alpha) {
  if (alpha < 0.0) throw Error(Errc::negative_alpha, "scale factor must be non-negative");
  if (alpha == 1.0) return detail::recheck(a.h, a.theta, a, {});
  if (alpha == 0.0)
    return detail::recheck(constant(0.0), ModifierMap{constant(0.0), MapKind::one_point}, a, {});
  return detail::recheck(mul(constant(alpha), a.h),
                         ModifierMap{mul(constant(alpha), a.theta.expr), MapKind::one_point}, a, {});
}

// Non-negative weighted sum with map sum(alpha_k * theta_k).
inline CombineResult combine_weighted_sum(const std::vector<CertifiedInstance>& items,
                                          const std::vector<double>& alphas) {
  if (items.empty()) throw Error(Errc::empty_list, "weighted sum needs at least one operand");
  if (items.size() != alphas.size())
    throw Error(Errc::empty_list, "weighted sum needs one weight per operand");
  for (double alpha : alphas)
    if (alpha < 0.0) throw Error(Errc::negative_alpha, "weights must be non-negative");
  for (std::size_t i = 1; i < items.size(); ++i) detail::require_compatible(items[0], items[i]);

  auto scaled = [&](std::size_t i, const Expr& e) {
    return alphas[i] == 1.0 ? e : mul(constant(alphas[i]), e);
  };
  Expr h = scaled(0, items[0].h);
  Expr t = scaled(0, items[0].theta.expr);
  for (std::size_t i = 1; i < items.size(); ++i) {
    h = add(std::move(h), scaled(i, items[i].h));
    t = add(std::move(t), scaled(i, items[i].theta.expr));
  }
  return detail::recheck(std::move(h), ModifierMap{std::move(t), MapKind::one_point}, items[0], {});
}

// Pointwise max with map max(theta_k). Closure under max is checked
// empirically rather than assumed.
inline CombineResult combine_max(const std::vector<CertifiedInstance>& items) {
  if (items.empty()) throw Error(Errc::empty_list, "max needs at least one operand");
  for (std::size_t i = 1; i < items.size(); ++i) detail::require_compatible(items[0], items[i]);
  std::vector<Expr> hs, ts;
  for (const CertifiedInstance& it : items) {
    hs.push_back(it.h);
    ts.push_back(it.theta.expr);
  }
  return detail::recheck(max_of(std::move(hs)), ModifierMap{max_of(std::move(ts)), MapKind::one_point},
                         items[0], {"pointwise max re-checked empirically"});
}

// Affine post-composition g(t) = slope*t + intercept with slope >= 0, applied
// to both the function and its map. With a non-zero intercept the class
// membership is not guaranteed; the re-check verdict in the result is the
// authority either way.
inline CombineResult combine_composition(const CertifiedInstance& a, double slope,
                                         double intercept) {
  if (slope < 0.0)
    throw Error(Errc::decreasing_composition, "composition must use a non-decreasing linear map");
  auto apply = [&](const Expr& e) {
    Expr scaled = slope == 1.0 ? e : mul(constant(slope), e);
    return intercept == 0.0 ? scaled : add(std::move(scaled), constant(intercept));
  };
  std::vector<std::string> notes;
  if (intercept != 0.0)
    notes.push_back("non-zero composition intercept: certified status rests on the re-check only");
  return detail::recheck(apply(a.h), ModifierMap{apply(a.theta.expr), MapKind::one_point}, a,
                         std::move(notes));
}

// Pointwise sup (finite family) under one shared modifier map. Operands must
// carry structurally identical maps.
inline CombineResult combine_sup(const std::vector<CertifiedInstance>& items) {
  if (items.empty()) throw Error(Errc::empty_list, "sup needs at least one operand");
  for (std::size_t i = 1; i < items.size(); ++i) {
    detail::require_compatible(items[0], items[i]);
    if (!modifier_maps_equal(items[0].theta, items[i].theta))
      throw Error(Errc::mixed_modifier_maps, "sup requires one shared modifier map");
  }
  std::vector<Expr> hs;
  for (const CertifiedInstance& it : items) hs.push_back(it.h);
  return detail::recheck(max_of(std::move(hs)), items[0].theta, items[0], {});
}

}  // namespace gsconvex
