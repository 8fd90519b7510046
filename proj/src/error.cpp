#include "gradeff/error.hpp"

namespace gradeff {

std::string_view to_string(error_kind k) {
  switch (k) {
    case error_kind::syntax: return "SyntaxError";
    case error_kind::scope: return "ScopeError";
    case error_kind::type: return "TypeError";
    case error_kind::no_lattice: return "NoLatticeError";
    case error_kind::effect_escape: return "EffectEscape";
    case error_kind::index_overflow: return "IndexOverflow";
    case error_kind::index_mismatch: return "IndexMismatch";
    case error_kind::env_domain_mismatch: return "EnvDomainMismatch";
    case error_kind::algebra_mismatch: return "AlgebraMismatch";
    case error_kind::enumeration_budget_exceeded: return "EnumerationBudgetExceeded";
    case error_kind::unsupported_primitive: return "UnsupportedPrimitive";
    case error_kind::input_mismatch: return "InputMismatch";
    case error_kind::usage: return "UsageError";
  }
  return "Error";
}

std::string error::describe() const {
  std::string out(to_string(kind_));
  if (pos_.known()) out += " at " + std::to_string(pos_.line) + ":" + std::to_string(pos_.col);
  out += ": ";
  out += what();
  return out;
}

}  // namespace gradeff
