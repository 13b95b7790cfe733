#pragma once

// Optimality certification. certify_unconstrained tests the sampled
// sufficient condition for a candidate minimizer of a certified instance:
//   grad h(b2).(b1-b2) - h(b2)/sigma - theta(b2,sigma)/sigma - limit
//     >= sigma^(s-1) [theta(b1,sigma) - theta(b2,sigma)]
// for all sampled b1 and interior sigma (limit = lim theta((b1+b2)/2,s)/s as
// sigma -> 0+). certify_kkt does the constrained analogue in three parts.
// brute_force_min is the independent grid oracle the certificates are judged
// against; NOT_CERTIFIED is a failed sufficient condition, not a disproof.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gsconvex/check.hpp"
#include "gsconvex/gradient.hpp"
#include "gsconvex/gradineq.hpp"

namespace gsconvex {

struct UnconstrainedProblem {
  Expr h;
  ModifierMap theta;
  BoxDomain domain;
  SamplePlan plan;
};

struct MinCertReport {
  bool certified = false;
  double worst_margin = 0.0;
  bool has_witness = false;
  Witness witness;  // b1 in witness.b1, sigma in witness.sigma; b2 is the candidate
  std::vector<double> candidate;
  std::vector<double> gradient_at_candidate;
  GradientFlags grad_flags;  // one_sided_fallback doubles as the singular-gradient disclosure
  long n_evaluated = 0;
  long n_domain_errors = 0;
  double s = 1.0;
  Tolerance tol;
};

inline MinCertReport certify_unconstrained(const UnconstrainedProblem& p,
                                           const std::vector<double>& b2, Tolerance tol = {}) {
  p.domain.validate();
  p.plan.validate();
  detail::require_map_kind(p.theta, MapKind::one_point, "certify_unconstrained");
  const double s = p.plan.s;

  MinCertReport rep;
  rep.candidate = b2;
  rep.s = s;
  rep.tol = tol;

  GradientEvaluator ge(p.h, p.domain.arity());
  rep.gradient_at_candidate = ge.at(b2, &p.domain, &rep.grad_flags);
  const double hb2 = eval(p.h, b2);

  // Candidate-side quantities do not depend on b1.
  auto theta_at = [&](const std::vector<double>& b, double sigma) {
    return eval(p.theta.expr, b, sigma);
  };

  // Probe points: both sides of every sampled pair, plus the candidate itself
  // (the inequality is frequently tightest at b1 = b2).
  std::vector<std::vector<double>> probes;
  for (const PointPair& pr : sample_pairs(p.domain, p.plan)) {
    probes.push_back(pr.b1);
    probes.push_back(pr.b2);
  }
  probes.push_back(b2);

  WorstCase worst;
  for (const std::vector<double>& b1 : probes) {
    std::vector<double> mid(b1.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (b1[i] + b2[i]);
    LimitEstimate lim = limit_theta_over_sigma(p.theta, mid);
    if (lim.status != LimitEstimate::Status::converged)
      throw Error(Errc::divergent_limit,
                  "theta(mid, sigma)/sigma does not converge as sigma -> 0+");
    double dot = 0.0;
    for (std::size_t i = 0; i < b1.size(); ++i)
      dot += rep.gradient_at_candidate[i] * (b1[i] - b2[i]);

    for (double sigma : p.plan.sigma_grid) {
      if (sigma <= 0.0) continue;
      try {
        double lhs = dot - hb2 / sigma - theta_at(b2, sigma) / sigma - lim.value;
        double rhs = std::pow(sigma, s - 1.0) * (theta_at(b1, sigma) - theta_at(b2, sigma));
        worst.update(lhs - rhs, Witness{b1, b2, sigma});
        ++rep.n_evaluated;
      } catch (const Error& e) {
        if (e.code() != Errc::domain) throw;
        ++rep.n_domain_errors;
      }
    }
  }

  if (worst.has) {
    rep.worst_margin = worst.margin;
    rep.witness = worst.witness;
    rep.has_witness = true;
  }
  rep.certified = worst.has && rep.n_domain_errors == 0 && worst.margin >= -tol.slack(worst.margin);
  return rep;
}

// --- brute-force oracle -----------------------------------------------------

struct OracleResult {
  std::vector<double> argmin;
  double value = 0.0;
  bool found = false;
  long n_evaluated = 0;
  long n_domain_errors = 0;
  long n_infeasible = 0;
};

namespace detail {

template <typename Visit>
void walk_grid(const std::vector<double>& lo, const std::vector<double>& hi, int grid_n,
               Visit&& visit) {
  const std::size_t m = lo.size();
  std::vector<int> idx(m, 0);
  std::vector<double> p(m);
  const int last = grid_n - 1;
  for (;;) {
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = last == 0 ? lo[i]
                       : lo[i] + (hi[i] - lo[i]) * (static_cast<double>(idx[i]) /
                                                    static_cast<double>(last));
    }
    visit(p);
    std::size_t i = 0;
    while (i < m && ++idx[i] > last) {
      idx[i] = 0;
      ++i;
    }
    if (i == m) break;
  }
}

}  // namespace detail

// Exhaustive uniform grid search (grid_n points per coordinate, endpoints
// included) with one refinement pass on a 10x finer local grid around the
// incumbent. Ties keep the first (lowest-index) grid point. Optional
// constraints restrict the scan to points with every f_i <= feasibility_tol.
inline OracleResult brute_force_min(const Expr& h, const BoxDomain& d, int grid_n,
                                    const std::vector<Expr>* constraints = nullptr,
                                    double feasibility_tol = 1e-9) {
  d.validate();
  if (grid_n < 1) throw Error(Errc::invalid_plan, "grid_n must be at least 1");
  const std::vector<double> lo = d.lo;
  const std::vector<double> hi = d.effective_hi();

  OracleResult res;
  auto consider = [&](const std::vector<double>& p) {
    if (constraints) {
      for (const Expr& f : *constraints) {
        double v;
        try {
          v = eval(f, p);
        } catch (const Error& e) {
          if (e.code() != Errc::domain) throw;
          ++res.n_domain_errors;
          return;
        }
        if (v > feasibility_tol) {
          ++res.n_infeasible;
          return;
        }
      }
    }
    double v;
    try {
      v = eval(h, p);
    } catch (const Error& e) {
      if (e.code() != Errc::domain) throw;
      ++res.n_domain_errors;
      return;
    }
    ++res.n_evaluated;
    if (!res.found || v < res.value) {
      res.found = true;
      res.value = v;
      res.argmin = p;
    }
  };

  detail::walk_grid(lo, hi, grid_n, consider);

  if (res.found && grid_n > 1) {
    std::vector<double> rlo(lo.size()), rhi(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
      double step = (hi[i] - lo[i]) / static_cast<double>(grid_n - 1);
      rlo[i] = std::max(lo[i], res.argmin[i] - step);
      rhi[i] = std::min(hi[i], res.argmin[i] + step);
    }
    detail::walk_grid(rlo, rhi, 21, consider);  // 10x finer across +-1 coarse cell
  }
  return res;
}

// --- KKT-style certificates ---------------------------------------------------

struct ConstrainedProblem {
  Expr h;
  ModifierMap theta;
  std::vector<Expr> constraints;             // feasible set: f_i(b) <= 0
  std::vector<ModifierMap> constraint_maps;  // recorded; the sampled inequality uses the objective map
  BoxDomain domain;
  SamplePlan plan;
};

struct KktCertificate {
  std::vector<double> b_star;
  std::vector<double> multipliers;
};

struct KktReport {
  double stationarity_residual = 0.0;  // inf-norm of grad h + sum v_i grad f_i
  std::vector<double> complementarity_residuals;
  bool stationarity_ok = false;
  bool complementarity_ok = false;
  bool inequality_ok = false;
  double worst_margin = 0.0;
  bool has_witness = false;
  Witness witness;  // probe point in b1, sigma; b2 echoes b_star
  long n_evaluated = 0;
  long n_domain_errors = 0;
  bool certified = false;
  GradientFlags grad_flags;
  double s = 1.0;
  Tolerance tol;
  // Reading conventions for the sampled optimality inequality, disclosed in
  // every report: which value term it uses and where probe points come from.
  std::string value_term_convention = "objective-at-candidate";
  std::string probe_convention = "probe points sampled from the domain";
};

inline KktReport certify_kkt(const ConstrainedProblem& p, const KktCertificate& cert,
                             Tolerance tol = {}) {
  p.domain.validate();
  p.plan.validate();
  detail::require_map_kind(p.theta, MapKind::one_point, "certify_kkt");
  if (cert.multipliers.size() != p.constraints.size())
    throw Error(Errc::usage, "certificate needs one multiplier per constraint");
  for (double v : cert.multipliers)
    if (v < 0.0) throw Error(Errc::negative_multiplier, "multipliers must be non-negative");
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    double fi = eval(p.constraints[i], cert.b_star);
    if (fi > tol.abs)
      throw Error(Errc::infeasible,
                  "candidate violates constraint " + std::to_string(i + 1) + " by " +
                      std::to_string(fi));
  }

  KktReport rep;
  rep.s = p.plan.s;
  rep.tol = tol;

  // Part 1: stationarity of the Lagrangian gradient.
  GradientEvaluator ge_h(p.h, p.domain.arity());
  std::vector<double> resid = ge_h.at(cert.b_star, &p.domain, &rep.grad_flags);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    GradientEvaluator ge_f(p.constraints[i], p.domain.arity());
    std::vector<double> gf = ge_f.at(cert.b_star, &p.domain, &rep.grad_flags);
    for (std::size_t j = 0; j < resid.size(); ++j) resid[j] += cert.multipliers[i] * gf[j];
  }
  for (double r : resid) rep.stationarity_residual = std::max(rep.stationarity_residual, std::fabs(r));
  rep.stationarity_ok = rep.stationarity_residual <= tol.abs;

  // Part 2: complementary slackness.
  rep.complementarity_ok = true;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    double r = std::fabs(cert.multipliers[i] * eval(p.constraints[i], cert.b_star));
    rep.complementarity_residuals.push_back(r);
    if (r > tol.abs) rep.complementarity_ok = false;
  }

  // Part 3: the sampled optimality inequality
  //   h(b*)/sigma + theta(b*,sigma)/sigma + limit
  //     <= -(sum v_i) limit - 2 sigma^(s-1) [theta(b1,sigma) - theta(b*,sigma)]
  // over probe points b1 and interior sigma.
  const double s = p.plan.s;
  const double hstar = eval(p.h, cert.b_star);
  double vsum = 0.0;
  for (double v : cert.multipliers) vsum += v;

  std::vector<std::vector<double>> probes;
  for (const PointPair& pr : sample_pairs(p.domain, p.plan)) {
    probes.push_back(pr.b1);
    probes.push_back(pr.b2);
  }
  probes.push_back(cert.b_star);

  WorstCase worst;
  for (const std::vector<double>& b1 : probes) {
    std::vector<double> mid(b1.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (b1[i] + cert.b_star[i]);
    LimitEstimate lim = limit_theta_over_sigma(p.theta, mid);
    if (lim.status != LimitEstimate::Status::converged)
      throw Error(Errc::divergent_limit,
                  "theta(mid, sigma)/sigma does not converge as sigma -> 0+");
    for (double sigma : p.plan.sigma_grid) {
      if (sigma <= 0.0) continue;
      try {
        double tstar = eval(p.theta.expr, cert.b_star, sigma);
        double t1 = eval(p.theta.expr, b1, sigma);
        double lhs = hstar / sigma + tstar / sigma + lim.value;
        double rhs = -vsum * lim.value - 2.0 * std::pow(sigma, s - 1.0) * (t1 - tstar);
        worst.update(rhs - lhs, Witness{b1, cert.b_star, sigma});
        ++rep.n_evaluated;
      } catch (const Error& e) {
        if (e.code() != Errc::domain) throw;
        ++rep.n_domain_errors;
      }
    }
  }
  if (worst.has) {
    rep.worst_margin = worst.margin;
    rep.witness = worst.witness;
    rep.has_witness = true;
  }
  rep.inequality_ok = worst.has && rep.n_domain_errors == 0 && worst.margin >= -tol.slack(worst.margin);
  rep.certified = rep.stationarity_ok && rep.complementarity_ok && rep.inequality_ok;
  return rep;
}

// --- uniqueness scan ------------------------------------------------------------

struct UniquenessReport {
  bool unique_on_grid = false;
  double min_value = 0.0;
  double candidate_value = 0.0;
  long n_near_min = 0;  // grid points within value_tol of the grid minimum
  bool has_second = false;
  std::vector<double> second_minimizer;  // a near-min point outside the candidate's neighborhood
  double neighborhood_radius = 0.0;
};

// Scans a uniform grid for competing minimizers: the candidate is unique on
// the grid when every point within value_tol of the minimum lies in a small
// neighborhood (two grid steps) of it. Meaningful only after the instance was
// certified under strict-mode checking; this routine just reports the scan.
inline UniquenessReport check_uniqueness(const UnconstrainedProblem& p,
                                         const std::vector<double>& b2, int grid_n = 1001,
                                         double value_tol = 1e-9) {
  p.domain.validate();
  if (grid_n < 2) throw Error(Errc::invalid_plan, "uniqueness scan needs at least 2 grid points");
  const std::vector<double> lo = p.domain.lo;
  const std::vector<double> hi = p.domain.effective_hi();

  double max_step = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i)
    max_step = std::max(max_step, (hi[i] - lo[i]) / static_cast<double>(grid_n - 1));

  UniquenessReport rep;
  rep.neighborhood_radius = 2.0 * max_step;
  rep.candidate_value = eval(p.h, b2);

  double min_value = rep.candidate_value;
  detail::walk_grid(lo, hi, grid_n, [&](const std::vector<double>& pt) {
    try {
      min_value = std::min(min_value, eval(p.h, pt));
    } catch (const Error& e) {
      if (e.code() != Errc::domain) throw;
    }
  });
  rep.min_value = min_value;

  detail::walk_grid(lo, hi, grid_n, [&](const std::vector<double>& pt) {
    double v;
    try {
      v = eval(p.h, pt);
    } catch (const Error& e) {
      if (e.code() != Errc::domain) throw;
      return;
    }
    if (v > min_value + value_tol) return;
    ++rep.n_near_min;
    double dist = 0.0;
    for (std::size_t i = 0; i < pt.size(); ++i) dist = std::max(dist, std::fabs(pt[i] - b2[i]));
    if (dist > rep.neighborhood_radius && !rep.has_second) {
      rep.has_second = true;
      rep.second_minimizer = pt;
    }
  });

  rep.unique_on_grid = !rep.has_second && rep.candidate_value <= min_value + value_tol;
  return rep;
}

}  // namespace gsconvex
