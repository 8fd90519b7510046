#pragma once

// The object language: a call-by-value lambda calculus with pairs, booleans,
// integers mod 4 and effect primitives, its concrete syntax and types.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gradeff/effect_algebra.hpp"
#include "gradeff/error.hpp"
#include "gradeff/signature.hpp"
#include "gradeff/value.hpp"

namespace gradeff {

////////////////////////////////////////////////////////////////////////////////
// types
////////////////////////////////////////////////////////////////////////////////

struct type_expr;
using type_expr_ptr = std::shared_ptr<const type_expr>;

// Types as written. Arrow latents are kept as raw annotation items ("rd r",
// "out a", "t") until an algebra gives them meaning.
struct type_expr {
  enum class kind { base, product, arrow };

  kind k = kind::base;
  base_type base = base_type::unit;
  type_expr_ptr first;   // product first / arrow domain
  type_expr_ptr second;  // product second / arrow codomain
  std::vector<std::string> latent;

  static type_expr_ptr make_base(base_type b);
  static type_expr_ptr make_product(type_expr_ptr a, type_expr_ptr b);
  static type_expr_ptr make_arrow(type_expr_ptr dom, std::vector<std::string> latent, type_expr_ptr cod);

  std::string show() const;
  friend bool operator==(const type_expr& a, const type_expr& b);
};

// Types with latents resolved to grades of a particular algebra.
class obj_type {
 public:
  enum class kind { unit, boolean, int4, product, arrow };

  obj_type();  // unit
  static obj_type unit();
  static obj_type boolean();
  static obj_type int4();
  static obj_type of(base_type b);
  static obj_type product(obj_type a, obj_type b);
  static obj_type arrow(obj_type dom, grade latent, obj_type cod);

  kind tag() const;
  const obj_type& first() const;  // product first / arrow domain
  const obj_type& second() const;  // product second / arrow codomain
  const obj_type& domain() const { return first(); }
  const obj_type& codomain() const { return second(); }
  const grade& latent() const;

  bool is_first_order() const;

  // int4 -> {ip p} (int4, bool)
  std::string show() const;
  // Back to syntax; the inverse of resolve.
  type_expr_ptr to_expr() const;

  friend bool operator==(const obj_type& a, const obj_type& b);

 private:
  struct node;
  explicit obj_type(std::shared_ptr<const node> n) : node_(std::move(n)) {}
  std::shared_ptr<const node> node_;
};

// How a latent grade is written inside "{...}".
std::vector<std::string> latent_items(const grade& g);
std::string show_latent(const grade& g);

// Resolves written latents in `alg`: effect tokens must name declared
// parameters/regions/tags of the right kind; "t"/"f" are accepted by the
// boolean algebra only. Throws type or scope errors.
obj_type resolve(const type_expr& t, const effect_algebra& alg, const signature& sig);

sem_type sem_of_first_order(const obj_type& t);

////////////////////////////////////////////////////////////////////////////////
// terms
////////////////////////////////////////////////////////////////////////////////

struct term;
using term_ptr = std::shared_ptr<const term>;

struct term {
  enum class kind { var, lam, app, let, constant, pair, fst, snd, cond, ask, read, write, out };

  kind k = kind::constant;
  source_pos pos;
  std::string name;          // variable, binder, or primitive's declared name
  type_expr_ptr annotation;  // lam parameter type
  value literal;             // constant
  std::vector<term_ptr> kids;
  bool sequence = false;     // a let written as "e1; e2"

  const term& child(std::size_t i) const { return *kids.at(i); }

  static term_ptr var(std::string x, source_pos p = {});
  static term_ptr lam(std::string x, type_expr_ptr t, term_ptr body, source_pos p = {});
  static term_ptr app(term_ptr f, term_ptr a, source_pos p = {});
  static term_ptr let(std::string x, term_ptr bound, term_ptr body, source_pos p = {});
  static term_ptr seq(term_ptr first, term_ptr rest, source_pos p = {});
  static term_ptr constant(value v, source_pos p = {});
  static term_ptr pair(term_ptr a, term_ptr b, source_pos p = {});
  static term_ptr fst(term_ptr e, source_pos p = {});
  static term_ptr snd(term_ptr e, source_pos p = {});
  static term_ptr cond(term_ptr c, term_ptr t, term_ptr e, source_pos p = {});
  static term_ptr ask(std::string param, source_pos p = {});
  static term_ptr read(std::string region, source_pos p = {});
  static term_ptr write(std::string region, term_ptr e, source_pos p = {});
  static term_ptr out(std::string tag, term_ptr e, source_pos p = {});

  // Structural equality; positions are ignored.
  friend bool operator==(const term& a, const term& b);
};

std::string_view to_string(term::kind k);

// Binder name of "e1; e2".
inline constexpr const char* sequence_binder = "_";

struct program {
  signature sig;
  term_ptr body;
};

program parse(const std::string& source);
// Parses a term against an existing signature (no declarations).
term_ptr parse_term(const std::string& source, const signature& sig);
// Parses a type in the surface syntax ("int4 -> {rd r} bool").
type_expr_ptr parse_type(const std::string& source);

std::string pretty(const term& e);
// Declarations followed by the term.
std::string pretty(const program& p);

std::set<std::string> free_vars(const term& e);
// Capture-avoiding e[x := v].
term_ptr substitute(const term_ptr& e, const std::string& x, const term_ptr& v);

// Let nodes numbered 0, 1, ... in pre-order.
std::map<const term*, int> number_lets(const term& e);

// Effect primitives occurring in e, as the token each one contributes.
std::set<effect_token> primitives_used(const term& e);

bool is_value(const term& e);

}  // namespace gradeff
