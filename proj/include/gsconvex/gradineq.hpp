#pragma once

// Differential consequences of a certified instance: upper bounds on
// grad h(b2).(b1-b2) and on the symmetric gradient gap
// (grad h(b2)-grad h(b1)).(b1-b2), each evaluated over sampled pairs and the
// interior sigma grid. These are conditional statements: they are expected to
// hold only when the instance is certified and the stated sign hypotheses are
// met, so every report carries the hypothesis flags next to the margins and
// leaves the interpretation to the caller.

#include <cmath>
#include <string>
#include <vector>

#include "gsconvex/check.hpp"
#include "gsconvex/gradient.hpp"

namespace gsconvex {

struct LimitEstimate {
  enum class Status { converged, divergent };
  Status status = Status::divergent;
  double value = 0.0;            // meaningful when converged
  std::vector<double> sequence;  // sequence[k-1] = theta(b, 2^-k) / 2^-k
  int converged_at = -1;         // first 1-based k whose Cauchy gap passed; -1 if none
};

// Estimates lim_{sigma->0+} theta(b, sigma)/sigma along the dyadic sequence
// sigma_k = 2^-k. Dyadic points make the quotient exact for maps linear in
// sigma. Convergence = final Cauchy gap <= 1e-8 relative; any term above
// 1e12 in magnitude flags divergence.
inline LimitEstimate limit_theta_over_sigma(const ModifierMap& theta,
                                            const std::vector<double>& b, int depth = 40) {
  detail::require_map_kind(theta, MapKind::one_point, "limit_theta_over_sigma");
  LimitEstimate est;
  est.sequence.reserve(static_cast<std::size_t>(depth));
  double sigma = 1.0;
  for (int k = 1; k <= depth; ++k) {
    sigma *= 0.5;
    double term = eval(theta.expr, b, sigma) / sigma;
    if (std::fabs(term) > 1e12) {
      est.status = LimitEstimate::Status::divergent;
      est.sequence.push_back(term);
      return est;
    }
    est.sequence.push_back(term);
    if (k >= 2 && est.converged_at < 0) {
      double gap = std::fabs(est.sequence[static_cast<std::size_t>(k - 1)] -
                             est.sequence[static_cast<std::size_t>(k - 2)]);
      if (gap <= 1e-8 * std::max(1.0, std::fabs(term))) est.converged_at = k;
    }
  }
  const double last = est.sequence.back();
  const double prev = est.sequence[est.sequence.size() - 2];
  if (std::fabs(last - prev) <= 1e-8 * std::max(1.0, std::fabs(last))) {
    est.status = LimitEstimate::Status::converged;
    est.value = last;
  }
  return est;
}

struct HypothesisFlags {
  bool h_nonneg_on_samples = true;
  bool h_negative_on_samples = true;
  bool theta_nonpos_on_samples = true;
};

struct IneqResult {
  std::string name;
  WorstCase worst;
  long n_evaluated = 0;
  bool hypotheses_met = false;
};

struct GradIneqReport {
  std::vector<IneqResult> inequalities;
  HypothesisFlags flags;
  long n_domain_errors = 0;
  long n_divergent_limits = 0;
  GradientFlags grad_flags;
  double s = 1.0;
  Tolerance tol;
};

namespace detail {

inline double dot_diff(const std::vector<double>& g, const std::vector<double>& b1,
                       const std::vector<double>& b2) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * (b1[i] - b2[i]);
  return acc;
}

// Per-pair context shared by all the gradient inequalities.
struct PairContext {
  const PointPair* pair;
  double hb1, hb2;
  std::vector<double> g1, g2;  // g1 filled only when requested
  double limit_mid;            // lim theta(mid, sigma)/sigma
};

struct GradLoopStats {
  long n_domain_errors = 0;
  long n_divergent = 0;
  HypothesisFlags flags;
  GradientFlags grad_flags;
};

template <typename PerSigma>
void gradient_pair_loop(const Expr& h, const ModifierMap& theta, const BoxDomain& d,
                        const SamplePlan& plan, bool need_g1, GradLoopStats& stats,
                        PerSigma&& per_sigma) {
  require_map_kind(theta, MapKind::one_point, "gradient inequality check");
  GradientEvaluator ge(h, d.arity());
  const std::vector<PointPair> pairs = sample_pairs(d, plan);
  for (const PointPair& pr : pairs) {
    PairContext ctx;
    ctx.pair = &pr;
    try {
      ctx.hb1 = eval(h, pr.b1);
      ctx.hb2 = eval(h, pr.b2);
      ctx.g2 = ge.at(pr.b2, &d, &stats.grad_flags);
      if (need_g1) ctx.g1 = ge.at(pr.b1, &d, &stats.grad_flags);
    } catch (const Error& e) {
      if (e.code() != Errc::domain && e.code() != Errc::singular_gradient) throw;
      ++stats.n_domain_errors;
      continue;
    }
    LimitEstimate lim = limit_theta_over_sigma(theta, midpoint(pr));
    if (lim.status != LimitEstimate::Status::converged) {
      ++stats.n_divergent;
      continue;
    }
    ctx.limit_mid = lim.value;

    if (ctx.hb1 < 0.0 || ctx.hb2 < 0.0) stats.flags.h_nonneg_on_samples = false;
    if (ctx.hb1 >= 0.0 || ctx.hb2 >= 0.0) stats.flags.h_negative_on_samples = false;

    for (double sigma : plan.sigma_grid) {
      if (sigma <= 0.0) continue;  // the bounds divide by sigma
      double t1, t2, tm;
      try {
        t1 = eval(theta.expr, pr.b1, sigma);
        t2 = eval(theta.expr, pr.b2, sigma);
        tm = eval(theta.expr, midpoint(pr), sigma);
      } catch (const Error& e) {
        if (e.code() != Errc::domain) throw;
        ++stats.n_domain_errors;
        continue;
      }
      if (t1 > 0.0 || t2 > 0.0 || tm > 0.0) stats.flags.theta_nonpos_on_samples = false;
      per_sigma(ctx, sigma, t1, t2);
    }
  }
}

}  // namespace detail

// Two upper bounds on grad h(b2).(b1-b2) for a certified non-negative
// instance: a sum form
//   sigma^(s-1) [h(b1)+h(b2)+theta(b1,sigma)+theta(b2,sigma)] + limit
// and a difference form
//   sigma^(s-1) [h(b1)-h(b2)+theta(b1,sigma)-theta(b2,sigma)]
//     + h(b2)/sigma + theta(b2,sigma)/sigma + limit.
inline GradIneqReport check_gradient_bounds(const Expr& h, const ModifierMap& theta,
                                            const BoxDomain& d, const SamplePlan& plan,
                                            Tolerance tol = {}) {
  GradIneqReport rep;
  rep.s = plan.s;
  rep.tol = tol;
  IneqResult sum_bound{"sum_bound", {}, 0, false};
  IneqResult diff_bound{"diff_bound", {}, 0, false};
  detail::GradLoopStats stats;
  const double s = plan.s;
  detail::gradient_pair_loop(
      h, theta, d, plan, /*need_g1=*/false, stats,
      [&](const detail::PairContext& ctx, double sigma, double t1, double t2) {
        const PointPair& pr = *ctx.pair;
        double lhs = detail::dot_diff(ctx.g2, pr.b1, pr.b2);
        double w = std::pow(sigma, s - 1.0);
        Witness wit{pr.b1, pr.b2, sigma};
        double rhs_sum = w * (ctx.hb1 + ctx.hb2 + t1 + t2) + ctx.limit_mid;
        sum_bound.worst.update(rhs_sum - lhs, wit);
        ++sum_bound.n_evaluated;
        double rhs_diff = w * (ctx.hb1 - ctx.hb2 + t1 - t2) + ctx.hb2 / sigma + t2 / sigma +
                          ctx.limit_mid;
        diff_bound.worst.update(rhs_diff - lhs, wit);
        ++diff_bound.n_evaluated;
      });
  rep.flags = stats.flags;
  rep.n_domain_errors = stats.n_domain_errors;
  rep.n_divergent_limits = stats.n_divergent;
  rep.grad_flags = stats.grad_flags;
  sum_bound.hypotheses_met = stats.flags.h_nonneg_on_samples;
  diff_bound.hypotheses_met = stats.flags.h_nonneg_on_samples;
  rep.inequalities = {sum_bound, diff_bound};
  return rep;
}

// Tighter bound available when the modifier map is non-positive:
//   grad h(b2).(b1-b2) <= sigma^(s-1)[h(b1)-h(b2)+theta(b1,sigma)-theta(b2,sigma)] + limit.
inline GradIneqReport check_gradient_bound_nonpos_map(const Expr& h, const ModifierMap& theta,
                                                      const BoxDomain& d, const SamplePlan& plan,
                                                      Tolerance tol = {}) {
  GradIneqReport rep;
  rep.s = plan.s;
  rep.tol = tol;
  IneqResult bound{"nonpos_map_bound", {}, 0, false};
  detail::GradLoopStats stats;
  const double s = plan.s;
  detail::gradient_pair_loop(
      h, theta, d, plan, /*need_g1=*/false, stats,
      [&](const detail::PairContext& ctx, double sigma, double t1, double t2) {
        const PointPair& pr = *ctx.pair;
        double lhs = detail::dot_diff(ctx.g2, pr.b1, pr.b2);
        double rhs = std::pow(sigma, s - 1.0) * (ctx.hb1 - ctx.hb2 + t1 - t2) + ctx.limit_mid;
        bound.worst.update(rhs - lhs, Witness{pr.b1, pr.b2, sigma});
        ++bound.n_evaluated;
      });
  rep.flags = stats.flags;
  rep.n_domain_errors = stats.n_domain_errors;
  rep.n_divergent_limits = stats.n_divergent;
  rep.grad_flags = stats.grad_flags;
  bound.hypotheses_met = stats.flags.h_nonneg_on_samples && stats.flags.theta_nonpos_on_samples;
  rep.inequalities = {bound};
  return rep;
}

// Bounds on the symmetric gap (grad h(b2)-grad h(b1)).(b1-b2).
//   gap_bound:     [h(b1)+h(b2)+2 theta(b2,sigma)]/sigma + 2 limit   (as stated, the
//                  theta(b2,sigma)/sigma term appears twice)
//   gap_bound_alt: same with the second occurrence read as theta(b1,sigma)/sigma
//   gap_bound_negative: 2 limit alone, for negative h with non-positive theta.
inline GradIneqReport check_gradient_gap_bounds(const Expr& h, const ModifierMap& theta,
                                                const BoxDomain& d, const SamplePlan& plan,
                                                Tolerance tol = {}) {
  GradIneqReport rep;
  rep.s = plan.s;
  rep.tol = tol;
  IneqResult gap{"gap_bound", {}, 0, false};
  IneqResult gap_alt{"gap_bound_alt", {}, 0, false};
  IneqResult gap_neg{"gap_bound_negative", {}, 0, false};
  detail::GradLoopStats stats;
  detail::gradient_pair_loop(
      h, theta, d, plan, /*need_g1=*/true, stats,
      [&](const detail::PairContext& ctx, double sigma, double t1, double t2) {
        const PointPair& pr = *ctx.pair;
        std::vector<double> gdiff(ctx.g2.size());
        for (std::size_t i = 0; i < gdiff.size(); ++i) gdiff[i] = ctx.g2[i] - ctx.g1[i];
        double lhs = detail::dot_diff(gdiff, pr.b1, pr.b2);
        Witness wit{pr.b1, pr.b2, sigma};
        double rhs = (ctx.hb1 + ctx.hb2 + t2 + t2) / sigma + 2.0 * ctx.limit_mid;
        gap.worst.update(rhs - lhs, wit);
        ++gap.n_evaluated;
        double rhs_alt = (ctx.hb1 + ctx.hb2 + t1 + t2) / sigma + 2.0 * ctx.limit_mid;
        gap_alt.worst.update(rhs_alt - lhs, wit);
        ++gap_alt.n_evaluated;
        double rhs_neg = 2.0 * ctx.limit_mid;
        gap_neg.worst.update(rhs_neg - lhs, wit);
        ++gap_neg.n_evaluated;
      });
  rep.flags = stats.flags;
  rep.n_domain_errors = stats.n_domain_errors;
  rep.n_divergent_limits = stats.n_divergent;
  rep.grad_flags = stats.grad_flags;
  gap.hypotheses_met = stats.flags.h_nonneg_on_samples;
  gap_alt.hypotheses_met = stats.flags.h_nonneg_on_samples;
  gap_neg.hypotheses_met =
      stats.flags.h_negative_on_samples && stats.flags.theta_nonpos_on_samples;
  rep.inequalities = {gap, gap_alt, gap_neg};
  return rep;
}

}  // namespace gsconvex
