#pragma once

// Scalar liveness as a coeffect system over ({f, t}, and, t): t means the
// context is demanded, f that it is not. Demands of subterms sharing one
// context are merged with disjunction.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gradeff/calculus.hpp"
#include "gradeff/effect_inference.hpp"

namespace gradeff {

// How a lambda splits its body demand r into the immediate demand F and the
// latent F' (F and F' = r).
enum class lam_split {
  duplicate,   // F = F' = r
  latent_max,  // F = t, F' = r
};

struct coeffect_derivation;
using coeffect_derivation_ptr = std::shared_ptr<const coeffect_derivation>;

struct coeffect_derivation {
  std::string rule;
  term_ptr subject;
  obj_type type;  // arrow latents are t/f
  bool demand = false;
  std::vector<coeffect_derivation_ptr> children;
  // lam: the split of the body demand; let: same for the implicit lambda
  // over the body.
  std::optional<bool> immediate;
  std::optional<bool> latent;
  std::vector<coercion> coercions;
};

struct liveness_entry {
  int id = 0;
  std::string binder;
  source_pos pos;
  bool live = true;
};

struct coeffect_judgment {
  type_context ctx;
  coeffect_derivation_ptr root;
  std::vector<liveness_entry> liveness;  // by let id

  const obj_type& type() const { return root->type; }
  bool coeffect() const { return root->demand; }
};

// f below t.
bool is_co_subtype(const obj_type& a, const obj_type& b);
obj_type join_co_types(const obj_type& a, const obj_type& b);

// Throws unsupported_primitive for ask/read/write/out.
coeffect_judgment infer_coeffect(const signature& sig, const type_context& ctx, const term_ptr& e,
                                 lam_split policy = lam_split::duplicate);

}  // namespace gradeff
