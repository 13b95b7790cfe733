#pragma once

// Set-level checks in R^(m+1). A SetSpec describes an epigraph-shaped set:
// points (b, beta) with height(b) <= beta, where height is the pointwise max
// of the component functions (one component = a single epigraph, several =
// their intersection). set_check samples member pairs, forms the weighted
// combination point, and tests membership of the result.

#include <string>
#include <utility>
#include <vector>

#include "gsconvex/check.hpp"

namespace gsconvex {

struct SetSpec {
  std::vector<Expr> components;  // height(b) = max over components
  ModifierMap theta;
  double s = 1.0;
};

namespace detail {

inline double set_height(const SetSpec& spec, const std::vector<double>& b) {
  double best = eval(spec.components.at(0), b);
  for (std::size_t i = 1; i < spec.components.size(); ++i)
    best = std::max(best, eval(spec.components[i], b));
  return best;
}

}  // namespace detail

// Samples member points (b, height(b)+offset) for every pair of offsets and
// every sigma, then asserts the combined point stays in the set. Margin is
// combined_beta - height(combined_b), the signed distance to the boundary.
inline CheckReport set_check(const SetSpec& spec, const BoxDomain& d, const SamplePlan& plan,
                             const std::vector<double>& beta_offsets, Tolerance tol = {}) {
  detail::require_map_kind(spec.theta, MapKind::one_point, "set_check");
  if (spec.components.empty()) throw Error(Errc::empty_list, "set spec needs at least one component");
  if (beta_offsets.empty()) throw Error(Errc::empty_list, "set_check needs at least one beta offset");
  for (double off : beta_offsets)
    if (off < 0.0) throw Error(Errc::invalid_plan, "beta offsets must be non-negative");
  if (spec.s != plan.s)
    throw Error(Errc::mismatched_s, "set spec and plan disagree on the s exponent");

  const double s = spec.s;
  return detail::run_check(
      "set", d, plan, tol, /*strict=*/false,
      [&](const PointPair& pr, double sigma) -> detail::SampleValue {
        double height1 = detail::set_height(spec, pr.b1);
        double height2 = detail::set_height(spec, pr.b2);
        double t1 = eval(spec.theta.expr, pr.b1, sigma);
        double t2 = eval(spec.theta.expr, pr.b2, sigma);
        double tm = eval(spec.theta.expr, detail::midpoint(pr), sigma);
        double combined_height = detail::set_height(spec, detail::combine_point(pr, sigma));

        // Worst offsets are the smallest ones, but all pairs are checked so a
        // violation witness carries the exact sample that broke membership.
        double worst = 0.0, worst_rhs = 0.0;
        bool first = true;
        for (double off_a : beta_offsets) {
          for (double off_b : beta_offsets) {
            double beta = std::pow(sigma, s) * (height1 + off_a + t1) +
                          std::pow(1.0 - sigma, s) * (height2 + off_b + t2) + tm;
            double margin = beta - combined_height;
            if (first || margin < worst) {
              first = false;
              worst = margin;
              worst_rhs = beta;
            }
          }
        }
        return {worst, worst_rhs};
      });
}

struct EquivalenceReport {
  CheckReport function_report;
  CheckReport set_report;
  bool agree = false;
};

// Function-level general s-convexity versus the epigraph-level set check on
// the same plan. The two verdicts must coincide; `agree` records whether they
// actually did.
inline EquivalenceReport epigraph_equivalence(const Expr& h, const ModifierMap& theta,
                                              const BoxDomain& d, const SamplePlan& plan,
                                              Tolerance tol = {},
                                              const std::vector<double>& beta_offsets = {0.0, 1.0}) {
  EquivalenceReport rep;
  rep.function_report = check_general_s_convex(h, theta, d, plan, tol);
  SetSpec spec{{h}, theta, plan.s};
  rep.set_report = set_check(spec, d, plan, beta_offsets, tol);
  rep.agree = rep.function_report.verdict == rep.set_report.verdict;
  return rep;
}

// Finite intersection: all specs must share the modifier map and s; the
// intersection's height is the max over all components.
inline CheckReport intersect_check(const std::vector<SetSpec>& specs, const BoxDomain& d,
                                   const SamplePlan& plan, Tolerance tol = {},
                                   const std::vector<double>& beta_offsets = {0.0, 1.0}) {
  if (specs.empty()) throw Error(Errc::empty_list, "intersection needs at least one set");
  SetSpec merged{{}, specs[0].theta, specs[0].s};
  for (const SetSpec& sp : specs) {
    if (sp.s != specs[0].s) throw Error(Errc::mismatched_s, "sets use different s exponents");
    if (!modifier_maps_equal(sp.theta, specs[0].theta))
      throw Error(Errc::mixed_modifier_maps, "intersection requires one shared modifier map");
    merged.components.insert(merged.components.end(), sp.components.begin(), sp.components.end());
  }
  CheckReport rep = set_check(merged, d, plan, beta_offsets, tol);
  rep.definition = "set-intersection";
  return rep;
}

}  // namespace gsconvex
