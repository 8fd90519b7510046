#include "gradeff/semantics.hpp"

#include <algorithm>

namespace gradeff {

void let_counters::hit(int id) {
  if (counts.size() <= static_cast<std::size_t>(id)) counts.resize(id + 1, 0);
  ++counts[id];
}

std::uint64_t let_counters::at(int id) const {
  return static_cast<std::size_t>(id) < counts.size() ? counts[id] : 0;
}

namespace {

value bind(const value& env, const std::string& x, const value& v) {
  auto fields = env.fields();
  fields.insert_or_assign(x, v);
  return value::record(std::move(fields));
}

value project(const value& p, bool first) { return first ? p.first() : p.second(); }

const coercion* find_coercion(const std::vector<coercion>& cs, const std::string& site) {
  for (const auto& c : cs) {
    if (c.site == site) return &c;
  }
  return nullptr;
}

using run_fn = std::function<value(const value&, let_counters*)>;

struct compiled {
  grade index;
  run_fn run;
};

////////////////////////////////////////////////////////////////////////////////
// effect side
////////////////////////////////////////////////////////////////////////////////

class effect_compiler {
 public:
  effect_compiler(monad_ptr m, const term& root) : m_(std::move(m)), let_ids_(number_lets(root)) {}

  compiled compile(const derivation& d) {
    const effect_algebra& alg = m_->algebra();
    if (!alg.contains(d.effect)) {
      throw error(error_kind::algebra_mismatch,
                  "judgment index " + d.effect.show() + " is not in " + alg.name() + " of instance " + m_->name(),
                  d.subject->pos);
    }
    try {
      return compile_node(d);
    } catch (const error& err) {
      if (err.pos().known()) throw;
      throw error(err.kind(), err.what(), d.subject->pos);
    }
  }

 private:
  compiled compile_node(const derivation& d) {
    const monad_ptr m = m_;
    const effect_algebra& alg = m->algebra();
    const term& e = *d.subject;
    std::vector<compiled> kids;
    for (const auto& kid : d.children) kids.push_back(compile(*kid));

    if (d.rule == "sub") {
      compiled body = kids[0];
      grade to = d.effect;
      return {to, [m, body, to](const value& env, let_counters* c) {
                return m->iota(body.index, to, body.run(env, c));
              }};
    }

    using k = term::kind;
    switch (e.k) {
      case k::var: {
        std::string x = e.name;
        return {alg.unit(), [m, x](const value& env, let_counters*) { return m->eta(env.field(x)); }};
      }
      case k::constant: {
        value lit = e.literal;
        return {alg.unit(), [m, lit](const value&, let_counters*) { return m->eta(lit); }};
      }
      case k::lam: {
        compiled body = kids[0];
        std::string x = e.name;
        sem_type dom = sem_of(d.type.domain(), *m);
        return {alg.unit(), [m, body, x, dom](const value& env, let_counters* c) {
                  return m->eta(value::fun(dom, [body, env, x, c](const value& v) { return body.run(bind(env, x, v), c); }));
                }};
      }
      case k::app: {
        compiled fun = kids[0], arg = kids[1];
        grade latent = d.children[0]->type.latent();
        grade rest = alg.combine(arg.index, latent);
        grade index = alg.combine(fun.index, rest);
        const coercion* co = find_coercion(d.coercions, "argument");
        std::optional<std::pair<obj_type, obj_type>> arg_coercion = co ? co->type : std::nullopt;
        return {index, [m, fun, arg, latent, rest, arg_coercion](const value& env, let_counters* c) {
                  auto inner = [m, arg, latent, arg_coercion, c](const value& p) {
                    value applied = m->fmap(
                        arg.index,
                        [m, arg_coercion](const value& q) {
                          value a = arg_coercion ? coerce(*m, arg_coercion->first, arg_coercion->second, q.second())
                                                 : q.second();
                          return q.first()(a);
                        },
                        m->strength(arg.index, p.second(), arg.run(p.first(), c)));
                    return m->mu(arg.index, latent, applied);
                  };
                  value outer = m->strength(fun.index, env, fun.run(env, c));
                  return m->mu(fun.index, rest, m->fmap(fun.index, inner, outer));
                }};
      }
      case k::let: {
        compiled bound = kids[0], body = kids[1];
        std::string x = e.name;
        int id = let_ids_.at(&e);
        return {alg.combine(bound.index, body.index), [m, bound, body, x, id](const value& env, let_counters* c) {
                  if (c) c->hit(id);
                  value outer = m->strength(bound.index, env, bound.run(env, c));
                  auto inner = [body, x, c](const value& p) { return body.run(bind(p.first(), x, p.second()), c); };
                  return m->mu(bound.index, body.index, m->fmap(bound.index, inner, outer));
                }};
      }
      case k::pair: {
        compiled a = kids[0], b = kids[1];
        return {alg.combine(a.index, b.index), [m, a, b](const value& env, let_counters* c) {
                  value outer = m->strength(a.index, env, a.run(env, c));
                  auto inner = [m, b, c](const value& p) {
                    return m->strength(b.index, p.second(), b.run(p.first(), c));
                  };
                  return m->mu(a.index, b.index, m->fmap(a.index, inner, outer));
                }};
      }
      case k::fst:
      case k::snd: {
        compiled p = kids[0];
        bool first = e.k == k::fst;
        return {p.index, [m, p, first](const value& env, let_counters* c) {
                  return m->fmap(p.index, [first](const value& v) { return project(v, first); }, p.run(env, c));
                }};
      }
      case k::cond: {
        compiled test = kids[0];
        grade join = alg.join(kids[1].index, kids[2].index);
        auto branch = [&](const compiled& b, const char* site) -> compiled {
          const coercion* co = find_coercion(d.coercions, site);
          std::optional<std::pair<obj_type, obj_type>> ty = co ? co->type : std::nullopt;
          return {join, [m, b, join, ty](const value& env, let_counters* c) {
                    value t = b.run(env, c);
                    if (b.index != join) t = m->iota(b.index, join, t);
                    if (ty) t = m->fmap(join, [m, ty](const value& v) { return coerce(*m, ty->first, ty->second, v); }, t);
                    return t;
                  }};
        };
        compiled then_b = branch(kids[1], "then"), else_b = branch(kids[2], "else");
        return {alg.combine(test.index, join), [m, test, then_b, else_b, join](const value& env, let_counters* c) {
                  value outer = m->strength(test.index, env, test.run(env, c));
                  auto inner = [then_b, else_b, c](const value& p) {
                    return p.second().as_bool() ? then_b.run(p.first(), c) : else_b.run(p.first(), c);
                  };
                  return m->mu(test.index, join, m->fmap(test.index, inner, outer));
                }};
      }
      case k::ask:
      case k::read: {
        effect_token tok = e.k == k::ask ? effect_token::ip(e.name) : effect_token::rd(e.name);
        grade g = primitive_index(tok, e);
        return {g, [m, tok](const value&, let_counters*) { return m->perform(tok, value::unit()); }};
      }
      case k::write:
      case k::out: {
        compiled payload = kids[0];
        effect_token tok = e.k == k::write ? effect_token::wr(e.name) : effect_token::out(e.name);
        grade g = primitive_index(tok, e);
        return {alg.combine(payload.index, g), [m, payload, tok, g](const value& env, let_counters* c) {
                  auto act = [m, tok](const value& v) { return m->perform(tok, v); };
                  return m->mu(payload.index, g, m->fmap(payload.index, act, payload.run(env, c)));
                }};
      }
    }
    throw error(error_kind::type, "cannot denote rule " + d.rule, e.pos);
  }

  grade primitive_index(const effect_token& tok, const term& e) const {
    auto g = m_->algebra().primitive(tok);
    if (!g) {
      throw error(error_kind::unsupported_primitive,
                  "primitive '" + tok.show() + "' not supported by instance " + m_->name(), e.pos);
    }
    return *g;
  }

  monad_ptr m_;
  std::map<const term*, int> let_ids_;
};

////////////////////////////////////////////////////////////////////////////////
// coeffect side
////////////////////////////////////////////////////////////////////////////////

class coeffect_compiler {
 public:
  coeffect_compiler(comonad_ptr c, const term& root) : c_(std::move(c)), let_ids_(number_lets(root)) {}

  compiled compile(const coeffect_derivation& d) {
    try {
      return compile_node(d);
    } catch (const error& err) {
      if (err.pos().known()) throw;
      throw error(err.kind(), err.what(), d.subject->pos);
    }
  }

 private:
  void expect_split(const grade& imm, const grade& lat, const grade& body, const term& e) const {
    if (c_->zip_index(imm, lat) != body) {
      throw error(error_kind::index_mismatch,
                  "split " + imm.show() + ", " + lat.show() + " does not zip to the body demand " + body.show(), e.pos);
    }
  }

  compiled compile_node(const coeffect_derivation& d) {
    const comonad_ptr c = c_;
    const term& e = *d.subject;
    std::vector<compiled> kids;
    for (const auto& kid : d.children) kids.push_back(compile(*kid));

    using k = term::kind;
    switch (e.k) {
      case k::var: {
        std::string x = e.name;
        return {grade(true), [c, x](const value& g, let_counters*) { return c->epsilon(g).field(x); }};
      }
      case k::constant: {
        value lit = e.literal;
        return {grade(false), [lit](const value&, let_counters*) { return lit; }};
      }
      case k::lam: {
        compiled body = kids[0];
        grade imm(*d.immediate), lat(*d.latent);
        expect_split(imm, lat, body.index, e);
        std::string x = e.name;
        sem_type dom = c->carrier_of(lat, sem_of(d.type.domain(), *c));
        return {imm, [c, body, imm, lat, x, dom](const value& g, let_counters* cnt) {
                  return value::fun(dom, [c, body, imm, lat, x, g, cnt](const value& ds) {
                    value z = c->mzip(imm, lat, g, ds);
                    auto merge = [x](const value& p) { return bind(p.first(), x, p.second()); };
                    return body.run(c->fmap(body.index, merge, z), cnt);
                  });
                }};
      }
      case k::app: {
        compiled fun = kids[0], arg = kids[1];
        grade s = d.children[0]->type.latent();
        grade arg_side = c->algebra().combine(s, arg.index);
        const coercion* co = find_coercion(d.coercions, "argument");
        std::optional<std::pair<obj_type, obj_type>> ty = co ? co->type : std::nullopt;
        return {c->share_index(fun.index, arg_side), [c, fun, arg, s, arg_side, ty](const value& g, let_counters* cnt) {
                  value parts = c->share(fun.index, arg_side, g);
                  value f = fun.run(parts.first(), cnt);
                  value a = c->fmap(
                      s,
                      [c, arg, ty, cnt](const value& h) {
                        value v = arg.run(h, cnt);
                        return ty ? coerce(*c, ty->first, ty->second, v) : v;
                      },
                      c->delta(s, arg.index, parts.second()));
                  return f(a);
                }};
      }
      case k::let: {
        compiled bound = kids[0], body = kids[1];
        grade imm(*d.immediate), lat(*d.latent);
        expect_split(imm, lat, body.index, e);
        grade arg_side = c->algebra().combine(lat, bound.index);
        std::string x = e.name;
        int id = let_ids_.at(&e);
        return {c->share_index(imm, arg_side), [c, bound, body, imm, lat, arg_side, x, id](const value& g,
                                                                                           let_counters* cnt) {
                  value parts = c->share(imm, arg_side, g);
                  value a = c->fmap(
                      lat,
                      [bound, id, cnt](const value& h) {
                        if (cnt) cnt->hit(id);
                        return bound.run(h, cnt);
                      },
                      c->delta(lat, bound.index, parts.second()));
                  value z = c->mzip(imm, lat, parts.first(), a);
                  auto merge = [x](const value& p) { return bind(p.first(), x, p.second()); };
                  return body.run(c->fmap(body.index, merge, z), cnt);
                }};
      }
      case k::pair: {
        compiled a = kids[0], b = kids[1];
        return {c->share_index(a.index, b.index), [c, a, b](const value& g, let_counters* cnt) {
                  value parts = c->share(a.index, b.index, g);
                  return value::pair(a.run(parts.first(), cnt), b.run(parts.second(), cnt));
                }};
      }
      case k::fst:
      case k::snd: {
        compiled p = kids[0];
        bool first = e.k == k::fst;
        return {p.index, [p, first](const value& g, let_counters* cnt) { return project(p.run(g, cnt), first); }};
      }
      case k::cond: {
        compiled test = kids[0], then_b = kids[1], else_b = kids[2];
        grade branches = c->share_index(then_b.index, else_b.index);
        auto coercion_at = [&](const char* site) {
          const coercion* co = find_coercion(d.coercions, site);
          return co ? co->type : std::nullopt;
        };
        auto then_ty = coercion_at("then"), else_ty = coercion_at("else");
        return {c->share_index(test.index, branches),
                [c, test, then_b, else_b, branches, then_ty, else_ty](const value& g, let_counters* cnt) {
                  value outer = c->share(test.index, branches, g);
                  value inner = c->share(then_b.index, else_b.index, outer.second());
                  bool b = test.run(outer.first(), cnt).as_bool();
                  const compiled& chosen = b ? then_b : else_b;
                  const auto& ty = b ? then_ty : else_ty;
                  value v = chosen.run(b ? inner.first() : inner.second(), cnt);
                  return ty ? coerce(*c, ty->first, ty->second, v) : v;
                }};
      }
      case k::ask:
      case k::read:
      case k::write:
      case k::out: break;
    }
    throw error(error_kind::unsupported_primitive, "no coeffect denotation for " + std::string(to_string(e.k)), e.pos);
  }

  comonad_ptr c_;
  std::map<const term*, int> let_ids_;
};

}  // namespace

////////////////////////////////////////////////////////////////////////////////

sem_type sem_of(const obj_type& t, const indexed_monad& m) {
  switch (t.tag()) {
    case obj_type::kind::product: return sem_type::product(sem_of(t.first(), m), sem_of(t.second(), m));
    case obj_type::kind::arrow:
      return sem_type::function(sem_of(t.domain(), m), m.carrier_of(t.latent(), sem_of(t.codomain(), m)));
    default: return sem_of_first_order(t);
  }
}

sem_type sem_of(const obj_type& t, const indexed_comonad& c) {
  switch (t.tag()) {
    case obj_type::kind::product: return sem_type::product(sem_of(t.first(), c), sem_of(t.second(), c));
    case obj_type::kind::arrow:
      return sem_type::function(c.carrier_of(t.latent(), sem_of(t.domain(), c)), sem_of(t.codomain(), c));
    default: return sem_of_first_order(t);
  }
}

sem_type context_type(const type_context& ctx, const indexed_monad& m) {
  std::map<std::string, sem_type> fields;
  for (const auto& [x, t] : ctx) fields.emplace(x, sem_of(t, m));
  return sem_type::record(std::move(fields));
}

sem_type context_type(const type_context& ctx, const indexed_comonad& c) {
  std::map<std::string, sem_type> fields;
  for (const auto& [x, t] : ctx) fields.emplace(x, sem_of(t, c));
  return sem_type::record(std::move(fields));
}

// Coerced function values hold a plain pointer to the instance; instances
// outlive the values they build.
value coerce(const indexed_monad& m, const obj_type& from, const obj_type& to, const value& v) {
  if (from == to) return v;
  if (from.tag() == obj_type::kind::product) {
    return value::pair(coerce(m, from.first(), to.first(), v.first()), coerce(m, from.second(), to.second(), v.second()));
  }
  if (from.tag() != obj_type::kind::arrow) return v;
  const indexed_monad* mp = &m;
  return value::fun(sem_of(to.domain(), m), [mp, from, to, v](const value& x) {
    value t = v(x);
    if (from.latent() != to.latent()) t = mp->iota(from.latent(), to.latent(), t);
    if (!(from.codomain() == to.codomain())) {
      t = mp->fmap(to.latent(), [mp, from, to](const value& r) { return coerce(*mp, from.codomain(), to.codomain(), r); },
                   t);
    }
    return t;
  });
}

value coerce(const indexed_comonad& c, const obj_type& from, const obj_type& to, const value& v) {
  if (from == to) return v;
  if (from.tag() == obj_type::kind::product) {
    return value::pair(coerce(c, from.first(), to.first(), v.first()), coerce(c, from.second(), to.second(), v.second()));
  }
  if (from.tag() != obj_type::kind::arrow) return v;
  const indexed_comonad* cp = &c;
  return value::fun(c.carrier_of(to.latent(), sem_of(to.domain(), c)), [cp, from, to, v](const value& d) {
    value r = v(cp->weaken(to.latent(), from.latent(), d));
    return coerce(*cp, from.codomain(), to.codomain(), r);
  });
}

denotation denote_effect(const monad_ptr& inst, const signature&, const effect_judgment& j) {
  effect_compiler comp(inst, *j.root->subject);
  compiled c = comp.compile(*j.root);
  sem_type input = context_type(j.ctx, *inst);
  sem_type output = inst->carrier_of(c.index, sem_of(j.type(), *inst));
  return {c.index, input, output, c.run};
}

denotation denote_coeffect(const comonad_ptr& inst, const signature&, const coeffect_judgment& j) {
  if (!(inst->algebra() == bool_conj_algebra())) {
    throw error(error_kind::algebra_mismatch, "coeffect judgments are over bool_conj, instance " + inst->name() +
                                                  " uses " + inst->algebra().name());
  }
  coeffect_compiler comp(inst, *j.root->subject);
  compiled c = comp.compile(*j.root);
  sem_type input = inst->carrier_of(c.index, context_type(j.ctx, *inst));
  sem_type output = sem_of(j.type(), *inst);
  grade index = c.index;
  run_fn run = [inst, index, run = c.run](const value& g, let_counters* cnt) {
    if (!index.flag() && !g.is(value::kind::absent)) {
      throw error(error_kind::index_mismatch, "context " + show(g) + " supplied at demand f");
    }
    return run(g, cnt);
  };
  return {c.index, input, output, run};
}

////////////////////////////////////////////////////////////////////////////////
// evaluation
////////////////////////////////////////////////////////////////////////////////

namespace {

void collect_annotation_kinds(const type_expr& t, std::set<effect_token::kind>& out) {
  if (t.k == type_expr::kind::base) return;
  collect_annotation_kinds(*t.first, out);
  collect_annotation_kinds(*t.second, out);
  for (const auto& item : t.latent) {
    if (auto tok = effect_token::parse(item)) out.insert(tok->k);
  }
}

void collect_kinds(const term& e, std::set<effect_token::kind>& out) {
  if (e.k == term::kind::lam) collect_annotation_kinds(*e.annotation, out);
  for (const auto& kid : e.kids) collect_kinds(*kid, out);
}

[[noreturn]] void mismatch(const std::string& msg) { throw error(error_kind::input_mismatch, msg); }

void validate_inputs(const program& p, const run_inputs& in, const grade& effect, bool memory) {
  std::set<std::string> need_env, need_reads;
  if (effect.is_set()) {
    for (const auto& t : effect.tokens()) {
      if (t.k == effect_token::kind::implicit_param) need_env.insert(t.name);
      if (t.k == effect_token::kind::read) need_reads.insert(t.name);
    }
  }
  for (const auto& [name, v] : in.env) {
    auto it = p.sig.params.find(name);
    if (it == p.sig.params.end()) mismatch("'" + name + "' is not a declared parameter");
    if (!need_env.contains(name)) mismatch("parameter '" + name + "' is not demanded by effect " + effect.show());
    if (!conforms(v, sem_of(it->second))) mismatch("parameter '" + name + "' needs a " + std::string(to_string(it->second)));
  }
  for (const auto& name : need_env) {
    if (!in.env.contains(name)) mismatch("missing parameter '" + name + "'");
  }
  for (const auto& [name, v] : in.store) {
    auto it = p.sig.regions.find(name);
    if (it == p.sig.regions.end()) mismatch("'" + name + "' is not a declared region");
    if (!memory) mismatch("store supplied to a non-memory instance");
    if (!conforms(v, sem_of(it->second))) mismatch("region '" + name + "' needs a " + std::string(to_string(it->second)));
  }
  for (const auto& name : need_reads) {
    if (!in.store.contains(name)) mismatch("store is missing region '" + name + "'");
  }
}

}  // namespace

monad_ptr select_instance(const program& p, const std::string& selector, std::size_t trace_bound) {
  if (selector == "reader") return make_reader_instance(p.sig);
  if (selector == "memory") return make_memory_instance(p.sig);
  if (selector == "memory-exact") return make_memory_instance(p.sig, memory_monad::write_mode::exact);
  if (selector == "trace") return make_trace_instance(p.sig, trace_bound);
  if (selector == "identity") return identity_collapse_instance();
  if (selector != "auto") throw error(error_kind::usage, "unknown instance '" + selector + "'");

  std::set<effect_token::kind> kinds;
  for (const auto& t : primitives_used(*p.body)) kinds.insert(t.k);
  collect_kinds(*p.body, kinds);
  const bool ip = kinds.contains(effect_token::kind::implicit_param);
  const bool mem = kinds.contains(effect_token::kind::read) || kinds.contains(effect_token::kind::write);
  const bool out = kinds.contains(effect_token::kind::out);
  if (ip + mem + out > 1) {
    throw error(error_kind::usage, "program mixes parameter, memory and output effects; one instance per run");
  }
  if (ip) return make_reader_instance(p.sig);
  if (mem) return make_memory_instance(p.sig);
  if (out) return make_trace_instance(p.sig, trace_bound);
  return identity_collapse_instance();
}

execution_report eval_program(const program& p, const run_inputs& inputs, const monad_ptr& inst, lam_split policy) {
  effect_judgment j = infer_effect(p.sig, inst->algebra(), {}, p.body);
  validate_inputs(p, inputs, j.effect(), dynamic_cast<const memory_monad*>(inst.get()) != nullptr);
  denotation den = denote_effect(inst, p.sig, j);
  if (den.index != j.effect()) {
    throw error(error_kind::algebra_mismatch,
                "denotation index " + den.index.show() + " differs from annotation " + j.effect().show());
  }
  let_counters strict;
  observation obs = inst->observe(j.effect(), den(value::record({}), &strict), inputs);

  execution_report r;
  r.instance = inst->name();
  r.result = obs.result;
  r.type = j.type();
  r.writes = std::move(obs.writes);
  r.trace = std::move(obs.trace);
  r.effect = j.effect();

  std::optional<coeffect_judgment> cj;
  let_counters eliminated;
  if (primitives_used(*p.body).empty()) {
    cj = infer_coeffect(p.sig, {}, p.body, policy);
    denotation dc = denote_coeffect(make_partiality_instance(), p.sig, *cj);
    value in = cj->coeffect() ? value::record({}) : value::absent();
    value v = dc(in, &eliminated);
    if (j.type().is_first_order() && !equal(v, r.result)) {
      throw error(error_kind::index_mismatch,
                  "eliminating evaluator returned " + show(v) + ", strict evaluator " + show(r.result));
    }
    r.coeffect = cj->coeffect();
    r.eliminated_result = v;
  }

  for (const auto& [t, id] : number_lets(*p.body)) {
    let_report lr;
    lr.id = id;
    lr.binder = t->name;
    lr.pos = t->pos;
    lr.strict_evaluations = strict.at(id);
    lr.evaluations = cj ? eliminated.at(id) : strict.at(id);
    if (cj) lr.live = cj->liveness.at(id).live;
    r.lets.push_back(lr);
  }
  std::sort(r.lets.begin(), r.lets.end(), [](const let_report& a, const let_report& b) { return a.id < b.id; });
  return r;
}

execution_report eval_program(const std::string& source, const run_inputs& inputs, const std::string& selector) {
  program p = parse(source);
  return eval_program(p, inputs, select_instance(p, selector));
}

}  // namespace gradeff
