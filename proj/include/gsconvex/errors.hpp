#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsconvex {

// Every failure the library can signal, in one flat enum so callers (and the
// CLI exit-code mapping) can switch on it instead of matching message text.
enum class Errc {
  // expression layer
  syntax,              // malformed input text; position() points at the offender
  arity,               // variable index outside the declared arity
  domain,              // evaluation left the function's domain (log<=0, 0^neg, x/0, non-finite, ...)
  missing_sigma,       // expression references sigma but the eval point has none
  non_differentiable,  // abs/max/min node hit by the symbolic differentiator
  // sampling / plans
  empty_domain,
  invalid_plan,
  // algebra constructors
  mismatched_s,
  mismatched_domain,
  negative_alpha,
  empty_list,
  decreasing_composition,
  mixed_modifier_maps,
  wrong_map_kind,
  operand_not_certified,
  // optimality
  singular_gradient,
  divergent_limit,
  infeasible,
  negative_multiplier,
  // problem files / CLI
  schema,
  usage,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::syntax: return "syntax";
    case Errc::arity: return "arity";
    case Errc::domain: return "domain";
    case Errc::missing_sigma: return "missing-sigma";
    case Errc::non_differentiable: return "non-differentiable";
    case Errc::empty_domain: return "empty-domain";
    case Errc::invalid_plan: return "invalid-plan";
    case Errc::mismatched_s: return "mismatched-s";
    case Errc::mismatched_domain: return "mismatched-domain";
    case Errc::negative_alpha: return "negative-alpha";
    case Errc::empty_list: return "empty-list";
    case Errc::decreasing_composition: return "decreasing-composition";
    case Errc::mixed_modifier_maps: return "mixed-modifier-maps";
    case Errc::wrong_map_kind: return "wrong-map-kind";
    case Errc::operand_not_certified: return "operand-not-certified";
    case Errc::singular_gradient: return "singular-gradient";
    case Errc::divergent_limit: return "divergent-limit";
    case Errc::infeasible: return "infeasible";
    case Errc::negative_multiplier: return "negative-multiplier";
    case Errc::schema: return "schema";
    case Errc::usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(Errc code, std::string message, std::size_t position = npos)
      : std::runtime_error(std::move(message)), code_(code), position_(position) {}

  Errc code() const { return code_; }

  // Byte offset into the source text for parse errors; npos otherwise.
  std::size_t position() const { return position_; }

 private:
  Errc code_;
  std::size_t position_;
};

}  // namespace gsconvex
