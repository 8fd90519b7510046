#pragma once

// Type-and-effect inference: synthesizes the least effect of a term by
// structural rules and records every point where sub-effecting is used.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gradeff/calculus.hpp"
#include "gradeff/effect_algebra.hpp"

namespace gradeff {

using type_context = std::map<std::string, obj_type>;

// A use of sub-effecting (iota along `effect`) and/or of arrow subtyping
// (a value coercion along `type`) at a named site of the parent rule.
struct coercion {
  std::string site;  // "then", "else", "argument", "annotation"
  std::optional<std::pair<grade, grade>> effect;
  std::optional<std::pair<obj_type, obj_type>> type;
};

struct derivation;
using derivation_ptr = std::shared_ptr<const derivation>;

struct derivation {
  std::string rule;  // term kind name, or "sub"
  term_ptr subject;
  obj_type type;
  grade effect;
  std::vector<derivation_ptr> children;
  std::vector<coercion> coercions;
};

struct effect_judgment {
  type_context ctx;
  derivation_ptr root;

  const obj_type& type() const { return root->type; }
  const grade& effect() const { return root->effect; }
};

// a <: b: equal up to arrow latents, which are covariant under leq; arrow
// domains invariant. Unequal latents in an unordered algebra throw no_lattice.
bool is_subtype(const obj_type& a, const obj_type& b, const effect_algebra& alg);
// Least common supertype; throws type error on shape mismatch.
obj_type join_types(const obj_type& a, const obj_type& b, const effect_algebra& alg);

obj_type literal_type(const value& v);

effect_judgment infer_effect(const signature& sig, const effect_algebra& alg, const type_context& ctx,
                             const term_ptr& e);

// Wraps the judgment in a final sub-effecting step up to `declared`.
// Throws effect_escape unless effect <= declared.
effect_judgment check_against_annotation(const effect_judgment& j, const grade& declared,
                                         const effect_algebra& alg);

// Re-derives (type, effect) bottom-up from the rules alone and checks every
// node's recorded conclusion. Throws type error naming the first bad node.
std::pair<obj_type, grade> replay(const signature& sig, const effect_algebra& alg, const type_context& ctx,
                                  const derivation& d);

}  // namespace gradeff
