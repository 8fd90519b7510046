#pragma once

// Denotations compiled from derivations: effect judgments into an indexed
// monad (env -> T F tau), coeffect judgments into an indexed comonad
// (D F env -> tau). Both index their result by combining the indices of the
// parts; the judgment's annotation is never copied.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gradeff/calculus.hpp"
#include "gradeff/coeffect_inference.hpp"
#include "gradeff/effect_inference.hpp"
#include "gradeff/indexed_comonad.hpp"
#include "gradeff/indexed_monad.hpp"

namespace gradeff {

// Number of times each let's bound expression was invoked, by let id.
struct let_counters {
  std::vector<std::uint64_t> counts;

  void hit(int id);
  std::uint64_t at(int id) const;
};

struct denotation {
  grade index;
  sem_type input;   // [[Gamma]] or D F [[Gamma]]
  sem_type output;  // T F [[tau]] or [[tau]]
  std::function<value(const value&, let_counters*)> fn;

  value operator()(const value& in, let_counters* counters = nullptr) const { return fn(in, counters); }
};

sem_type sem_of(const obj_type& t, const indexed_monad& m);
sem_type sem_of(const obj_type& t, const indexed_comonad& c);
sem_type context_type(const type_context& ctx, const indexed_monad& m);
sem_type context_type(const type_context& ctx, const indexed_comonad& c);

// Value coercions along subtyping (iota on latents / weakening of demands).
value coerce(const indexed_monad& m, const obj_type& from, const obj_type& to, const value& v);
value coerce(const indexed_comonad& c, const obj_type& from, const obj_type& to, const value& v);

denotation denote_effect(const monad_ptr& inst, const signature& sig, const effect_judgment& j);
denotation denote_coeffect(const comonad_ptr& inst, const signature& sig, const coeffect_judgment& j);

struct let_report {
  int id = 0;
  std::string binder;
  source_pos pos;
  std::optional<bool> live;
  std::uint64_t evaluations = 0;         // with dead bindings eliminated
  std::uint64_t strict_evaluations = 0;  // effect-side evaluator
};

struct execution_report {
  std::string instance;
  value result;
  obj_type type;
  std::map<std::string, value> writes;
  std::vector<std::pair<std::string, value>> trace;
  grade effect;
  std::optional<bool> coeffect;  // primitive-free programs only
  std::optional<value> eliminated_result;  // from the dead-binding-eliminating evaluator
  std::vector<let_report> lets;
};

// Instance for a program: "reader", "memory", "trace", "identity", or "auto"
// (chosen from the primitives used; mixing parameter, memory and output
// primitives is a usage error).
monad_ptr select_instance(const program& p, const std::string& selector,
                          std::size_t trace_bound = default_trace_bound);

// Inputs must match the inferred index: env keys exactly the implicit
// parameters of the effect, store keys declared regions covering its reads.
// Anything else is input_mismatch.
execution_report eval_program(const program& p, const run_inputs& inputs, const monad_ptr& inst,
                              lam_split policy = lam_split::duplicate);
execution_report eval_program(const std::string& source, const run_inputs& inputs,
                              const std::string& selector = "auto");

}  // namespace gradeff
