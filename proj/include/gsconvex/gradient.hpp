#pragma once

// Gradient evaluation with graceful degradation: symbolic partials when the
// tree is differentiable and the point is regular, central differences when it
// is not, and one-sided quotients against the box edge. The flags record which
// route was taken so reports can disclose it.

#include <optional>
#include <span>
#include <vector>

#include "gsconvex/deriv.hpp"
#include "gsconvex/sampling.hpp"

namespace gsconvex {

struct GradientFlags {
  bool fd_fallback = false;        // some coordinate used finite differences
  bool one_sided_fallback = false; // some coordinate used a one-sided quotient
};

class GradientEvaluator {
 public:
  GradientEvaluator(Expr h, int arity, double fd_step = 1e-6, double one_sided_step = 1e-6)
      : h_(std::move(h)), fd_step_(fd_step), one_sided_step_(one_sided_step) {
    partials_.reserve(static_cast<std::size_t>(arity));
    if (is_differentiable(h_)) {
      for (int i = 0; i < arity; ++i) partials_.push_back(differentiate(h_, i));
    }
  }

  bool symbolic() const { return !partials_.empty(); }
  const std::vector<Expr>& partials() const { return partials_; }

  // Throws Error(Errc::singular_gradient) when every quotient direction leaves
  // the function's domain. Domain errors from h itself (the point not being
  // evaluable at all) propagate as Errc::domain.
  std::vector<double> at(std::span<const double> b, const BoxDomain* box,
                         GradientFlags* flags = nullptr) const {
    std::vector<double> g(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!partials_.empty()) {
        try {
          g[i] = eval(partials_[i], b);
          continue;
        } catch (const Error& e) {
          if (e.code() != Errc::domain) throw;
          // singular point for the symbolic form; fall through to quotients
        }
      }
      if (flags) flags->fd_fallback = true;
      g[i] = quotient(b, static_cast<int>(i), box, flags);
    }
    return g;
  }

 private:
  Expr h_;
  std::vector<Expr> partials_;
  double fd_step_;
  double one_sided_step_;

  double quotient(std::span<const double> b, int i, const BoxDomain* box,
                  GradientFlags* flags) const {
    const double bi = b[static_cast<std::size_t>(i)];
    const double h_central = fd_step_ * std::max(1.0, std::fabs(bi));
    bool central_ok = true;
    if (box) {
      const auto idx = static_cast<std::size_t>(i);
      const double hi = box->effective_hi()[idx];
      central_ok = bi - h_central >= box->lo[idx] && bi + h_central <= hi;
    }
    if (central_ok) {
      try {
        return central_difference(h_, b, {}, i, h_central);
      } catch (const Error& e) {
        if (e.code() != Errc::domain) throw;
      }
    }
    // one-sided: prefer stepping into the box interior
    if (flags) flags->one_sided_fallback = true;
    double step = one_sided_step_;
    if (box) {
      const auto idx = static_cast<std::size_t>(i);
      if (bi + step > box->effective_hi()[idx]) step = -step;
    }
    for (double dir : {step, -step}) {
      try {
        return one_sided_difference(h_, b, {}, i, dir);
      } catch (const Error& e) {
        if (e.code() != Errc::domain) throw;
      }
    }
    throw Error(Errc::singular_gradient,
                "gradient coordinate " + std::to_string(i + 1) +
                    " is not evaluable symbolically or by any difference quotient");
  }
};

}  // namespace gsconvex
