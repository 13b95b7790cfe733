#pragma once

// Deterministic sample plans: box domains (with +inf bounds replaced by a
// truncation bound), a sigma grid, and seeded low-discrepancy point pairs.
// Everything downstream (checkers, certificates, reports) inherits its
// reproducibility from this file: same plan, same bytes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gsconvex/errors.hpp"

namespace gsconvex {

struct BoxDomain {
  std::vector<double> lo;
  std::vector<double> hi;          // entries may be +infinity
  double truncation_bound = 10.0;  // replaces +infinity (and clips larger finite bounds) for sampling

  int arity() const { return static_cast<int>(lo.size()); }

  void validate() const {
    if (lo.empty() || lo.size() != hi.size())
      throw Error(Errc::empty_domain, "domain needs matching non-empty lo/hi");
    if (!std::isfinite(truncation_bound))
      throw Error(Errc::invalid_plan, "truncation bound must be finite");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!std::isfinite(lo[i]))
        throw Error(Errc::empty_domain, "lower bounds must be finite");
      if (lo[i] > hi[i])
        throw Error(Errc::empty_domain,
                    "empty domain: lo exceeds hi in coordinate " + std::to_string(i + 1));
      if (truncation_bound <= lo[i])
        throw Error(Errc::invalid_plan,
                    "truncation bound must exceed the lower bound in coordinate " +
                        std::to_string(i + 1));
    }
  }

  // Sampling box: [lo_i, min(hi_i, truncation_bound)] per coordinate.
  std::vector<double> effective_hi() const {
    std::vector<double> out(hi.size());
    for (std::size_t i = 0; i < hi.size(); ++i) out[i] = std::min(hi[i], truncation_bound);
    return out;
  }

  std::vector<double> center() const {
    std::vector<double> h = effective_hi();
    std::vector<double> c(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + h[i]);
    return c;
  }

  bool contains(std::span<const double> p) const {
    if (p.size() != lo.size()) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
};

inline std::vector<double> default_sigma_grid() {
  std::vector<double> g;
  g.push_back(1e-6);
  g.push_back(1e-3);
  for (int k = 0; k <= 20; ++k) g.push_back(static_cast<double>(k) / 20.0);
  std::sort(g.begin(), g.end());
  return g;
}

struct SamplePlan {
  int n_pairs = 512;
  std::vector<double> sigma_grid = default_sigma_grid();
  std::uint64_t seed = 0;
  double s = 1.0;  // the exponent of the convexity class under test

  void validate() const {
    if (n_pairs < 1) throw Error(Errc::invalid_plan, "n_pairs must be at least 1");
    if (!(s > 0.0) || s > 1.0) throw Error(Errc::invalid_plan, "s must lie in (0, 1]");
    if (sigma_grid.empty()) throw Error(Errc::invalid_plan, "sigma grid must be non-empty");
    double prev = -1.0;
    for (double v : sigma_grid) {
      if (!(v >= 0.0) || v > 1.0)
        throw Error(Errc::invalid_plan, "sigma grid values must lie in [0, 1]");
      if (v <= prev) throw Error(Errc::invalid_plan, "sigma grid must be strictly increasing");
      prev = v;
    }
    if (sigma_grid.front() != 0.0 || sigma_grid.back() != 1.0)
      throw Error(Errc::invalid_plan, "sigma grid must contain both endpoints 0 and 1");
  }
};

struct PointPair {
  std::vector<double> b1, b2;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

constexpr std::uint32_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                     31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

// Corner pairs explode as 4^m; beyond arity 3 keep only the four axis-extreme
// combinations so plans stay small for high-dimensional boxes.
constexpr int kFullCornerArity = 3;

inline void append_corner_pairs(const BoxDomain& d, const std::vector<double>& hi_eff,
                                std::vector<PointPair>& out) {
  const int m = d.arity();
  if (m <= kFullCornerArity) {
    const int corners = 1 << m;
    auto corner = [&](int mask) {
      std::vector<double> p(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i)
        p[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? hi_eff[static_cast<std::size_t>(i)]
                                                         : d.lo[static_cast<std::size_t>(i)];
      return p;
    };
    for (int a = 0; a < corners; ++a)
      for (int b = 0; b < corners; ++b) out.push_back({corner(a), corner(b)});
    return;
  }
  out.push_back({d.lo, d.lo});
  out.push_back({d.lo, hi_eff});
  out.push_back({hi_eff, d.lo});
  out.push_back({hi_eff, hi_eff});
}

}  // namespace detail

// Deterministic pair sample: corner pairs, then (center, center), then a
// seed-rotated Halton fill, truncated to exactly plan.n_pairs entries.
inline std::vector<PointPair> sample_pairs(const BoxDomain& d, const SamplePlan& plan) {
  d.validate();
  plan.validate();
  const int m = d.arity();
  const std::vector<double> hi_eff = d.effective_hi();

  std::vector<PointPair> out;
  out.reserve(static_cast<std::size_t>(plan.n_pairs));
  detail::append_corner_pairs(d, hi_eff, out);
  std::vector<double> c = d.center();
  out.push_back({c, c});

  if (out.size() > static_cast<std::size_t>(plan.n_pairs))
    out.resize(static_cast<std::size_t>(plan.n_pairs));

  // Cranley-Patterson rotation: one offset per Halton dimension, derived from
  // the seed, so distinct seeds give distinct (still low-discrepancy) sets.
  const int dims = 2 * m;
  constexpr int n_primes = static_cast<int>(sizeof(detail::kPrimes) / sizeof(*detail::kPrimes));
  std::vector<double> offset(static_cast<std::size_t>(dims));
  for (int i = 0; i < dims; ++i)
    offset[static_cast<std::size_t>(i)] =
        static_cast<double>(detail::splitmix64(plan.seed + static_cast<std::uint64_t>(i)) >> 11) *
        0x1.0p-53;

  std::uint64_t index = 1;
  while (out.size() < static_cast<std::size_t>(plan.n_pairs)) {
    PointPair pr;
    pr.b1.resize(static_cast<std::size_t>(m));
    pr.b2.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < dims; ++i) {
      std::uint32_t base = detail::kPrimes[i % n_primes];
      double u = detail::halton(index, base) + offset[static_cast<std::size_t>(i)];
      u -= std::floor(u);  // wrap into [0,1)
      int coord = i % m;
      double v = d.lo[static_cast<std::size_t>(coord)] +
                 u * (hi_eff[static_cast<std::size_t>(coord)] - d.lo[static_cast<std::size_t>(coord)]);
      if (i < m)
        pr.b1[static_cast<std::size_t>(coord)] = v;
      else
        pr.b2[static_cast<std::size_t>(coord)] = v;
    }
    out.push_back(std::move(pr));
    ++index;
  }
  return out;
}

}  // namespace gsconvex
