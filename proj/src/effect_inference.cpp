#include "gradeff/effect_inference.hpp"

namespace gradeff {

namespace {

[[noreturn]] void fail(error_kind k, const std::string& msg, const term& at) { throw error(k, msg, at.pos); }

// Attaches the term's position to position-less errors from the algebra.
template <typename F>
auto at_term(const term& e, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const error& err) {
    if (err.pos().known()) throw;
    throw error(err.kind(), err.what(), e.pos);
  }
}

bool latent_leq(const grade& a, const grade& b, const effect_algebra& alg) {
  if (a == b) return true;
  if (!alg.has_order()) {
    throw error(error_kind::no_lattice, "sub-effecting " + a.show() + " to " + b.show() + " needs an ordered algebra, " +
                                            alg.name() + " has none");
  }
  return alg.leq(a, b);
}

grade effect_of_primitive(const effect_algebra& alg, const effect_token& tok, const term& e) {
  auto g = alg.primitive(tok);
  if (!g) fail(error_kind::unsupported_primitive, "primitive '" + tok.show() + "' is not supported by " + alg.name(), e);
  return *g;
}

obj_type declared_type(const std::map<std::string, base_type>& table, const std::string& name, const term& e) {
  auto it = table.find(name);
  if (it == table.end()) fail(error_kind::scope, "'" + name + "' is not declared", e);
  return obj_type::of(it->second);
}

struct conclusion {
  obj_type type;
  grade effect;
  std::vector<coercion> coercions;
};

// Optional coercion from one branch to the join.
std::optional<coercion> branch_coercion(const std::string& site, const derivation& d, const obj_type& t,
                                        const grade& f) {
  coercion c{site, std::nullopt, std::nullopt};
  if (d.effect != f) c.effect = std::make_pair(d.effect, f);
  if (!(d.type == t)) c.type = std::make_pair(d.type, t);
  if (!c.effect && !c.type) return std::nullopt;
  return c;
}

type_context extend(const type_context& ctx, const std::string& x, const obj_type& t) {
  type_context out = ctx;
  out.insert_or_assign(x, t);
  return out;
}

// The conclusion of the rule for `e` given its premises.
conclusion conclude(const signature& sig, const effect_algebra& alg, const type_context& ctx, const term& e,
                    const std::vector<derivation_ptr>& kids) {
  using k = term::kind;
  const grade one = alg.unit();
  auto combine = [&](const grade& a, const grade& b) { return at_term(e, [&] { return alg.combine(a, b); }); };
  switch (e.k) {
    case k::var: {
      auto it = ctx.find(e.name);
      if (it == ctx.end()) fail(error_kind::scope, "unbound variable '" + e.name + "'", e);
      return {it->second, one, {}};
    }
    case k::constant: return {literal_type(e.literal), one, {}};
    case k::lam: {
      obj_type dom = at_term(e, [&] { return resolve(*e.annotation, alg, sig); });
      return {obj_type::arrow(dom, kids[0]->effect, kids[0]->type), one, {}};
    }
    case k::app: {
      const obj_type& ft = kids[0]->type;
      if (ft.tag() != obj_type::kind::arrow) fail(error_kind::type, "applying a non-function of type " + ft.show(), e);
      const obj_type& at = kids[1]->type;
      std::vector<coercion> cs;
      bool ok = at_term(e, [&] { return is_subtype(at, ft.domain(), alg); });
      if (!ok) {
        fail(error_kind::type, "argument of type " + at.show() + " where " + ft.domain().show() + " is expected", e);
      }
      if (!(at == ft.domain())) cs.push_back({"argument", std::nullopt, std::make_pair(at, ft.domain())});
      return {ft.codomain(), combine(combine(kids[0]->effect, kids[1]->effect), ft.latent()), std::move(cs)};
    }
    case k::let: return {kids[1]->type, combine(kids[0]->effect, kids[1]->effect), {}};
    case k::pair:
      return {obj_type::product(kids[0]->type, kids[1]->type), combine(kids[0]->effect, kids[1]->effect), {}};
    case k::fst:
    case k::snd: {
      const obj_type& pt = kids[0]->type;
      if (pt.tag() != obj_type::kind::product) fail(error_kind::type, "projection from non-pair type " + pt.show(), e);
      return {e.k == k::fst ? pt.first() : pt.second(), kids[0]->effect, {}};
    }
    case k::cond: {
      if (!(kids[0]->type == obj_type::boolean())) {
        fail(error_kind::type, "condition has type " + kids[0]->type.show() + ", expected bool", e);
      }
      if (!alg.has_order()) {
        fail(error_kind::no_lattice, "conditional needs a join of branch effects; " + alg.name() + " is unordered", e);
      }
      obj_type t = at_term(e, [&] { return join_types(kids[1]->type, kids[2]->type, alg); });
      grade j = at_term(e, [&] { return alg.join(kids[1]->effect, kids[2]->effect); });
      std::vector<coercion> cs;
      if (auto c = branch_coercion("then", *kids[1], t, j)) cs.push_back(*c);
      if (auto c = branch_coercion("else", *kids[2], t, j)) cs.push_back(*c);
      return {t, combine(kids[0]->effect, j), std::move(cs)};
    }
    case k::ask:
      return {declared_type(sig.params, e.name, e), effect_of_primitive(alg, effect_token::ip(e.name), e), {}};
    case k::read:
      return {declared_type(sig.regions, e.name, e), effect_of_primitive(alg, effect_token::rd(e.name), e), {}};
    case k::write:
    case k::out: {
      bool w = e.k == k::write;
      obj_type want = declared_type(w ? sig.regions : sig.tags, e.name, e);
      if (!(kids[0]->type == want)) {
        fail(error_kind::type, std::string(w ? "writing " : "emitting ") + kids[0]->type.show() + " to '" + e.name +
                                   "' of type " + want.show(),
             e);
      }
      grade prim = effect_of_primitive(alg, w ? effect_token::wr(e.name) : effect_token::out(e.name), e);
      return {obj_type::unit(), combine(kids[0]->effect, prim), {}};
    }
  }
  fail(error_kind::type, "unknown term former", e);
}

derivation_ptr infer(const signature& sig, const effect_algebra& alg, const type_context& ctx, const term_ptr& e) {
  std::vector<derivation_ptr> kids;
  switch (e->k) {
    case term::kind::lam: {
      obj_type dom = at_term(*e, [&] { return resolve(*e->annotation, alg, sig); });
      kids.push_back(infer(sig, alg, extend(ctx, e->name, dom), e->kids[0]));
      break;
    }
    case term::kind::let:
      kids.push_back(infer(sig, alg, ctx, e->kids[0]));
      kids.push_back(infer(sig, alg, extend(ctx, e->name, kids[0]->type), e->kids[1]));
      break;
    default:
      for (const auto& kid : e->kids) kids.push_back(infer(sig, alg, ctx, kid));
  }
  conclusion c = conclude(sig, alg, ctx, *e, kids);
  auto d = std::make_shared<derivation>();
  d->rule = std::string(to_string(e->k));
  d->subject = e;
  d->type = c.type;
  d->effect = c.effect;
  d->children = std::move(kids);
  d->coercions = std::move(c.coercions);
  return d;
}

}  // namespace

obj_type literal_type(const value& v) {
  switch (v.tag()) {
    case value::kind::unit: return obj_type::unit();
    case value::kind::boolean: return obj_type::boolean();
    case value::kind::int_mod: return obj_type::int4();
    default: throw error(error_kind::type, "constant " + show(v) + " is not a literal");
  }
}

bool is_subtype(const obj_type& a, const obj_type& b, const effect_algebra& alg) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case obj_type::kind::product:
      return is_subtype(a.first(), b.first(), alg) && is_subtype(a.second(), b.second(), alg);
    case obj_type::kind::arrow:
      return a.domain() == b.domain() && latent_leq(a.latent(), b.latent(), alg) &&
             is_subtype(a.codomain(), b.codomain(), alg);
    default: return true;
  }
}

obj_type join_types(const obj_type& a, const obj_type& b, const effect_algebra& alg) {
  auto mismatch = [&] { return error(error_kind::type, "branches have types " + a.show() + " and " + b.show()); };
  if (a.tag() != b.tag()) throw mismatch();
  switch (a.tag()) {
    case obj_type::kind::product:
      return obj_type::product(join_types(a.first(), b.first(), alg), join_types(a.second(), b.second(), alg));
    case obj_type::kind::arrow: {
      if (!(a.domain() == b.domain())) throw mismatch();
      grade l = a.latent() == b.latent() ? a.latent() : alg.join(a.latent(), b.latent());
      return obj_type::arrow(a.domain(), l, join_types(a.codomain(), b.codomain(), alg));
    }
    default: return a;
  }
}

effect_judgment infer_effect(const signature& sig, const effect_algebra& alg, const type_context& ctx,
                             const term_ptr& e) {
  return {ctx, infer(sig, alg, ctx, e)};
}

effect_judgment check_against_annotation(const effect_judgment& j, const grade& declared,
                                         const effect_algebra& alg) {
  if (!alg.contains(declared)) {
    throw error(error_kind::algebra_mismatch, declared.show() + " is not an index of " + alg.name());
  }
  if (j.effect() == declared && !alg.has_order()) return j;
  if (!latent_leq(j.effect(), declared, alg)) {
    throw error(error_kind::effect_escape,
                "effect " + j.effect().show() + " escapes the declared " + declared.show(), j.root->subject->pos);
  }
  auto d = std::make_shared<derivation>();
  d->rule = "sub";
  d->subject = j.root->subject;
  d->type = j.type();
  d->effect = declared;
  d->children = {j.root};
  d->coercions = {{"annotation", std::make_pair(j.effect(), declared), std::nullopt}};
  return {j.ctx, d};
}

std::pair<obj_type, grade> replay(const signature& sig, const effect_algebra& alg, const type_context& ctx,
                                  const derivation& d) {
  auto bad = [&](const std::string& why) {
    return error(error_kind::type, "derivation replay failed at " + d.rule + " '" + pretty(*d.subject) + "': " + why,
                 d.subject->pos);
  };
  if (d.rule == "sub") {
    if (d.children.size() != 1) throw bad("sub needs one premise");
    auto [t, f] = replay(sig, alg, ctx, *d.children[0]);
    if (d.children[0]->subject != d.subject && !(*d.children[0]->subject == *d.subject)) throw bad("subject changed");
    if (!(t == d.type)) throw bad("sub changed the type");
    if (!latent_leq(f, d.effect, alg)) throw bad(f.show() + " is not below " + d.effect.show());
    return {d.type, d.effect};
  }
  const term& e = *d.subject;
  if (d.rule != to_string(e.k)) throw bad("rule does not match the term former");
  if (d.children.size() != e.kids.size()) throw bad("wrong number of premises");
  for (std::size_t i = 0; i < e.kids.size(); ++i) {
    const term& premise = *d.children[i]->subject;
    if (&premise != e.kids[i].get() && !(premise == *e.kids[i])) throw bad("premise subject mismatch");
  }
  switch (e.k) {
    case term::kind::lam: {
      obj_type dom = resolve(*e.annotation, alg, sig);
      replay(sig, alg, extend(ctx, e.name, dom), *d.children[0]);
      break;
    }
    case term::kind::let: {
      auto first = replay(sig, alg, ctx, *d.children[0]);
      replay(sig, alg, extend(ctx, e.name, first.first), *d.children[1]);
      break;
    }
    default:
      for (const auto& kid : d.children) replay(sig, alg, ctx, *kid);
  }
  conclusion c = conclude(sig, alg, ctx, e, d.children);
  if (!(c.type == d.type)) throw bad("type " + d.type.show() + " should be " + c.type.show());
  if (c.effect != d.effect) throw bad("effect " + d.effect.show() + " should be " + c.effect.show());
  if (c.coercions.size() != d.coercions.size()) throw bad("coercions differ");
  for (std::size_t i = 0; i < c.coercions.size(); ++i) {
    const auto& x = c.coercions[i];
    const auto& y = d.coercions[i];
    bool same_type = x.type.has_value() == y.type.has_value() &&
                     (!x.type || (x.type->first == y.type->first && x.type->second == y.type->second));
    if (x.site != y.site || x.effect != y.effect || !same_type) throw bad("coercion at " + x.site + " differs");
  }
  return {d.type, d.effect};
}

}  // namespace gradeff
