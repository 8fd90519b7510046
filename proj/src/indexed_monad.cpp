#include "gradeff/indexed_monad.hpp"

#include "gradeff/error.hpp"

namespace gradeff {

namespace {

const token_set& tokens_of(const grade& g, const std::string& instance) {
  if (!g.is_set()) throw error(error_kind::algebra_mismatch, instance + " expects token-set grades, got " + g.show());
  return g.tokens();
}

std::map<std::string, sem_type> fields_for(const grade& g, effect_token::kind k, const signature& sig,
                                           const std::string& instance) {
  std::map<std::string, sem_type> out;
  for (const auto& t : tokens_of(g, instance)) {
    if (t.k == k) out.emplace(t.name, sig.token_type(t));
  }
  return out;
}

value swap_pair(const value& p) { return value::pair(p.second(), p.first()); }

}  // namespace

bool indexed_monad::iota_defined(const grade& x, const grade& y) const {
  return algebra().has_order() && algebra().leq(x, y);
}

value indexed_monad::perform(const effect_token& tok, const value&) const {
  throw error(error_kind::unsupported_primitive, "primitive '" + tok.show() + "' not supported by instance " + name());
}

value costrength(const indexed_monad& m, const grade& f, const value& t, const value& b) {
  return m.fmap(f, swap_pair, m.strength(f, b, t));
}

////////////////////////////////////////////////////////////////////////////////
// reader
////////////////////////////////////////////////////////////////////////////////

reader_monad::reader_monad(signature sig) : sig_(std::move(sig)), alg_(powerset_algebra(sig_.param_tokens())) {}

sem_type reader_monad::env_type(const grade& f) const {
  return sem_type::record(fields_for(f, effect_token::kind::implicit_param, sig_, name()));
}

sem_type reader_monad::carrier_of(const grade& f, const sem_type& a) const {
  return sem_type::function(env_type(f), a);
}

value reader_monad::fmap(const grade&, const value::mapping& fn, const value& t) const {
  return value::fun(t.domain(), [fn, t](const value& x) { return fn(t(x)); });
}

value reader_monad::eta(const value& a) const {
  return value::fun(sem_type::record({}), [a](const value&) { return a; });
}

value reader_monad::mu(const grade& f, const grade& g, const value& k) const {
  // x - (G - F) and x - (F - G) are the restrictions of x : F u G to F and G.
  auto f_fields = env_type(f).fields();
  auto g_fields = env_type(g).fields();
  return value::fun(env_type(alg_.combine(f, g)), [k, f_fields, g_fields](const value& x) {
    return k(x.restrict_to(f_fields))(x.restrict_to(g_fields));
  });
}

value reader_monad::iota(const grade& x, const grade& y, const value& t) const {
  if (!alg_.leq(x, y)) throw error(error_kind::algebra_mismatch, "iota needs " + x.show() + " <= " + y.show());
  auto x_fields = env_type(x).fields();
  return value::fun(env_type(y), [t, x_fields](const value& env) { return t(env.restrict_to(x_fields)); });
}

value reader_monad::strength(const grade&, const value& a, const value& t) const {
  return value::fun(t.domain(), [a, t](const value& x) { return value::pair(a, t(x)); });
}

value reader_monad::perform(const effect_token& tok, const value& arg) const {
  if (!alg_.primitive(tok)) return indexed_monad::perform(tok, arg);
  std::string p = tok.name;
  return value::fun(env_type(grade(token_set{tok})), [p](const value& env) { return env.field(p); });
}

observation reader_monad::observe(const grade& f, const value& t, const run_inputs& in) const {
  (void)f;
  return {t(value::record(in.env)), {}, {}};
}

////////////////////////////////////////////////////////////////////////////////
// memory
////////////////////////////////////////////////////////////////////////////////

memory_monad::memory_monad(signature sig, write_mode mode)
    : sig_(std::move(sig)), mode_(mode), alg_(powerset_algebra(sig_.memory_tokens())) {}

std::map<std::string, sem_type> memory_monad::reads_of(const grade& f) const {
  return fields_for(f, effect_token::kind::read, sig_, name());
}

std::map<std::string, sem_type> memory_monad::writes_of(const grade& f) const {
  return fields_for(f, effect_token::kind::write, sig_, name());
}

sem_type memory_monad::store_type(const grade& f) const { return sem_type::record(reads_of(f)); }

sem_type memory_monad::writes_type(const grade& f) const {
  return sem_type::record(writes_of(f), mode_ == write_mode::partial);
}

sem_type memory_monad::carrier_of(const grade& f, const sem_type& a) const {
  return sem_type::function(store_type(f), sem_type::product(a, writes_type(f)));
}

value memory_monad::fmap(const grade&, const value::mapping& fn, const value& t) const {
  return value::fun(t.domain(), [fn, t](const value& s) {
    value r = t(s);
    return value::pair(fn(r.first()), r.second());
  });
}

value memory_monad::eta(const value& a) const {
  return value::fun(sem_type::record({}), [a](const value&) { return value::pair(a, value::record({})); });
}

value memory_monad::merge_writes(const value& first, const value& second) const {
  auto out = first.fields();
  for (const auto& [name, v] : second.fields()) out.insert_or_assign(name, v);
  return value::record(std::move(out));
}

value memory_monad::sequenced_store(const value& store, const grade& second, const value& first_writes) const {
  auto out = store.restrict_to(reads_of(second)).fields();
  for (const auto& [name, v] : first_writes.fields()) {
    auto it = out.find(name);
    if (it != out.end()) it->second = v;
  }
  return value::record(std::move(out));
}

value memory_monad::mu(const grade& f, const grade& g, const value& h) const {
  auto f_reads = reads_of(f);
  // `this` outlives every value it builds: instances are held by monad_ptr
  // for the whole evaluation.
  const memory_monad* m = this;
  return value::fun(store_type(alg_.combine(f, g)), [m, h, f_reads, g](const value& s) {
    value r1 = h(s.restrict_to(f_reads));
    value r2 = r1.first()(m->sequenced_store(s, g, r1.second()));
    return value::pair(r2.first(), m->merge_writes(r1.second(), r2.second()));
  });
}

bool memory_monad::iota_defined(const grade& x, const grade& y) const {
  if (!alg_.leq(x, y)) return false;
  return mode_ == write_mode::partial || writes_of(x) == writes_of(y);
}

value memory_monad::iota(const grade& x, const grade& y, const value& t) const {
  if (!iota_defined(x, y)) {
    throw error(error_kind::algebra_mismatch, "iota undefined from " + x.show() + " to " + y.show() + " in " + name());
  }
  auto x_reads = reads_of(x);
  return value::fun(store_type(y), [t, x_reads](const value& s) { return t(s.restrict_to(x_reads)); });
}

value memory_monad::strength(const grade&, const value& a, const value& t) const {
  return value::fun(t.domain(), [a, t](const value& s) {
    value r = t(s);
    return value::pair(value::pair(a, r.first()), r.second());
  });
}

value memory_monad::perform(const effect_token& tok, const value& arg) const {
  if (!alg_.primitive(tok)) return indexed_monad::perform(tok, arg);
  std::string region = tok.name;
  if (tok.k == effect_token::kind::read) {
    return value::fun(store_type(grade(token_set{tok})), [region](const value& s) {
      return value::pair(s.field(region), value::record({}));
    });
  }
  return value::fun(sem_type::record({}), [region, arg](const value&) {
    return value::pair(value::unit(), value::record({{region, arg}}));
  });
}

observation memory_monad::observe(const grade& f, const value& t, const run_inputs& in) const {
  value r = t(value::record(in.store).restrict_to(reads_of(f)));
  return {r.first(), r.second().fields(), {}};
}

////////////////////////////////////////////////////////////////////////////////
// trace
////////////////////////////////////////////////////////////////////////////////

trace_monad::trace_monad(signature sig, std::size_t max_len)
    : sig_(std::move(sig)), alg_(trace_algebra(sig_.tag_names(), max_len)) {}

sem_type trace_monad::carrier_of(const grade& f, const sem_type& a) const {
  if (!f.is_trace()) throw error(error_kind::algebra_mismatch, "trace expects sequence grades, got " + f.show());
  std::vector<sem_type> payload;
  for (const auto& tag : f.trace()) payload.push_back(sig_.token_type(effect_token::out(tag)));
  return sem_type::product(a, sem_type::tuple(std::move(payload)));
}

value trace_monad::fmap(const grade&, const value::mapping& fn, const value& t) const {
  return value::pair(fn(t.first()), t.second());
}

value trace_monad::eta(const value& a) const { return value::pair(a, value::tuple({})); }

value trace_monad::mu(const grade& f, const grade& g, const value& t) const {
  alg_.combine(f, g);  // overflow check
  // outer (first) emissions precede inner ones
  std::vector<value> out = t.second().elements();
  const auto& inner = t.first().second().elements();
  out.insert(out.end(), inner.begin(), inner.end());
  return value::pair(t.first().first(), value::tuple(std::move(out)));
}

bool trace_monad::iota_defined(const grade& x, const grade& y) const { return x == y; }

value trace_monad::iota(const grade& x, const grade& y, const value& t) const {
  if (x != y) throw error(error_kind::no_lattice, "trace grades have no sub-effecting order");
  return t;
}

value trace_monad::strength(const grade&, const value& a, const value& t) const {
  return value::pair(value::pair(a, t.first()), t.second());
}

value trace_monad::perform(const effect_token& tok, const value& arg) const {
  if (!alg_.primitive(tok)) return indexed_monad::perform(tok, arg);
  return value::pair(value::unit(), value::tuple({arg}));
}

observation trace_monad::observe(const grade& f, const value& t, const run_inputs&) const {
  observation o{t.first(), {}, {}};
  const auto& emitted = t.second().elements();
  for (std::size_t i = 0; i < emitted.size(); ++i) o.trace.emplace_back(f.trace().at(i), emitted[i]);
  return o;
}

////////////////////////////////////////////////////////////////////////////////
// identity collapse
////////////////////////////////////////////////////////////////////////////////

identity_monad::identity_monad() : alg_(trivial_algebra()) {}

sem_type identity_monad::carrier_of(const grade&, const sem_type& a) const { return a; }
value identity_monad::fmap(const grade&, const value::mapping& fn, const value& t) const { return fn(t); }
value identity_monad::eta(const value& a) const { return a; }
value identity_monad::mu(const grade&, const grade&, const value& t) const { return t; }
value identity_monad::iota(const grade&, const grade&, const value& t) const { return t; }
value identity_monad::strength(const grade&, const value& a, const value& t) const { return value::pair(a, t); }
observation identity_monad::observe(const grade&, const value& t, const run_inputs&) const { return {t, {}, {}}; }

////////////////////////////////////////////////////////////////////////////////

monad_ptr make_reader_instance(const signature& sig) { return std::make_shared<reader_monad>(sig); }

monad_ptr make_reader_instance(const signature& sig, const effect_algebra& alg) {
  auto m = std::make_shared<reader_monad>(sig);
  if (!(m->algebra() == alg)) {
    throw error(error_kind::algebra_mismatch, "reader instance needs " + m->algebra().name() + ", got " + alg.name());
  }
  return m;
}

monad_ptr make_memory_instance(const signature& sig, memory_monad::write_mode mode) {
  return std::make_shared<memory_monad>(sig, mode);
}

monad_ptr make_trace_instance(const signature& sig, std::size_t max_len) {
  return std::make_shared<trace_monad>(sig, max_len);
}

monad_ptr identity_collapse_instance() { return std::make_shared<identity_monad>(); }

}  // namespace gradeff
