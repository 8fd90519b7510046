#include "gradeff/law_harness.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "gradeff/error.hpp"

namespace gradeff {

std::string_view to_string(verdict v) {
  switch (v) {
    case verdict::pass: return "pass";
    case verdict::sampled_pass: return "sampled-pass";
    case verdict::fail: return "fail";
    case verdict::budget_exceeded: return "budget-exceeded";
    case verdict::not_applicable: return "not-applicable";
  }
  return "?";
}

bool passed(verdict v) { return v == verdict::pass || v == verdict::sampled_pass || v == verdict::not_applicable; }

bool law_report::replay() const {
  if (!witness || !check) return false;
  try {
    return !check(witness->indices, witness->inputs).ok;
  } catch (const error&) {
    return true;
  }
}

////////////////////////////////////////////////////////////////////////////////
// runner
////////////////////////////////////////////////////////////////////////////////

namespace {

constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > saturated / b) return saturated;
  return a * b;
}

std::uint64_t space_of(const std::vector<sem_type>& doms) {
  std::uint64_t n = 1;
  for (const auto& d : doms) {
    auto c = cardinality(d);
    n = mul_sat(n, c ? *c : saturated);
  }
  return n;
}

law_outcome same(const value& lhs, const value& rhs) {
  law_outcome o;
  o.ok = equal(lhs, rhs);
  o.lhs = lhs;
  o.rhs = rhs;
  return o;
}

std::uint64_t law_seed(std::uint64_t seed, const std::string& law, const std::string& instance) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (char c : law + "/" + instance) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  return h;
}

}  // namespace

law_report run_law(const std::string& law, const std::string& instance, const std::vector<std::vector<grade>>& tuples,
                   const std::function<std::vector<sem_type>(const std::vector<grade>&)>& domains,
                   const law_check& check, const harness_config& cfg) {
  law_report r;
  r.law = law;
  r.instance = instance;
  r.check = check;
  r.index_tuples = tuples.size();
  if (tuples.empty()) {
    r.result = verdict::not_applicable;
    r.detail = "no index tuples";
    return r;
  }

  // Tuples whose value space fits an even share of the budget are checked
  // exhaustively; the rest are sampled.
  const std::uint64_t share = std::max<std::uint64_t>(1, cfg.budget / tuples.size());
  const std::uint64_t per_sample = cfg.sample_cases == 0 ? 0 : std::max<std::uint64_t>(16, cfg.sample_cases / tuples.size());
  std::mt19937_64 rng(law_seed(cfg.seed, law, instance));
  bool sampled = false;

  auto run_case = [&](const std::vector<grade>& t, const std::vector<value>& inputs) {
    ++r.cases;
    law_outcome o;
    try {
      o = check(t, inputs);
    } catch (const error& e) {
      o.ok = false;
      o.note = e.describe();
    }
    if (!o.ok) r.witness = counterexample{t, inputs, o};
    return o.ok;
  };

  for (const auto& t : tuples) {
    std::vector<sem_type> doms = domains(t);
    std::uint64_t n = space_of(doms);
    r.space = n == saturated || r.space > saturated - n ? saturated : r.space + n;
    if (n <= share) {
      std::vector<const std::vector<value>*> elems;
      for (const auto& d : doms) elems.push_back(&enumerate(d, share));
      std::vector<std::size_t> digit(doms.size(), 0);
      std::vector<value> inputs(doms.size());
      for (std::uint64_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < doms.size(); ++k) inputs[k] = (*elems[k])[digit[k]];
        if (!run_case(t, inputs)) {
          r.result = verdict::fail;
          return r;
        }
        for (std::size_t k = doms.size(); k-- > 0;) {
          if (++digit[k] < elems[k]->size()) break;
          digit[k] = 0;
        }
      }
    } else {
      if (per_sample == 0) {
        r.result = verdict::budget_exceeded;
        r.detail = "case space exceeds the budget and sampling is disabled";
        return r;
      }
      sampled = true;
      std::vector<value> inputs(doms.size());
      for (std::uint64_t i = 0; i < per_sample; ++i) {
        for (std::size_t k = 0; k < doms.size(); ++k) inputs[k] = sample(doms[k], rng);
        if (!run_case(t, inputs)) {
          r.result = verdict::fail;
          return r;
        }
      }
    }
  }
  r.result = sampled ? verdict::sampled_pass : verdict::pass;
  return r;
}

signature harness_signature() {
  signature sig;
  sig.declare(signature::name_kind::param, "p", base_type::int4);
  sig.declare(signature::name_kind::param, "q", base_type::int4);
  sig.declare(signature::name_kind::region, "r", base_type::int4);
  sig.declare(signature::name_kind::region, "s", base_type::int4);
  sig.declare(signature::name_kind::tag, "a", base_type::boolean);
  sig.declare(signature::name_kind::tag, "b", base_type::int4);
  return sig;
}

////////////////////////////////////////////////////////////////////////////////
// monad laws
////////////////////////////////////////////////////////////////////////////////

namespace {

using tuple_list = std::vector<std::vector<grade>>;

std::optional<grade> try_combine(const effect_algebra& alg, const grade& a, const grade& b) {
  try {
    return alg.combine(a, b);
  } catch (const error& e) {
    if (e.kind() == error_kind::index_overflow) return std::nullopt;
    throw;
  }
}

struct index_space {
  tuple_list singles, pairs, triples;
};

// Index tuples whose products exist (trace products may overflow).
index_space indices_of(const effect_algebra& alg, std::uint64_t budget) {
  index_space s;
  auto carrier = alg.carrier(budget);
  for (const auto& f : carrier) s.singles.push_back({f});
  for (const auto& f : carrier) {
    for (const auto& g : carrier) {
      auto fg = try_combine(alg, f, g);
      if (!fg) continue;
      s.pairs.push_back({f, g});
      for (const auto& h : carrier) {
        if (try_combine(alg, *fg, h)) s.triples.push_back({f, g, h});
      }
    }
  }
  return s;
}

const sem_type& bool_t() {
  static const sem_type t = sem_type::boolean();
  return t;
}

const sem_type& bool_endo() {
  static const sem_type t = sem_type::function(sem_type::boolean(), sem_type::boolean());
  return t;
}

}  // namespace

std::vector<law_report> check_indexed_monad_laws(const monad_ptr& m, const harness_config& cfg) {
  const effect_algebra& alg = m->algebra();
  const std::string name = m->name();
  const grade one = alg.unit();
  const sem_type& A = bool_t();
  index_space ix = indices_of(alg, cfg.budget);
  auto T = [m](const grade& f, const sem_type& a) { return m->carrier_of(f, a); };
  std::vector<law_report> out;

  out.push_back(run_law(
      "left_unit", name, ix.singles, [&](const auto& t) { return std::vector<sem_type>{T(t[0], A)}; },
      [m, one](const auto& t, const auto& v) { return same(m->mu(one, t[0], m->eta(v[0])), v[0]); }, cfg));

  out.push_back(run_law(
      "right_unit", name, ix.singles, [&](const auto& t) { return std::vector<sem_type>{T(t[0], A)}; },
      [m, one](const auto& t, const auto& v) {
        return same(m->mu(t[0], one, m->fmap(t[0], [m](const value& a) { return m->eta(a); }, v[0])), v[0]);
      },
      cfg));

  out.push_back(run_law(
      "associativity", name, ix.triples,
      [&](const auto& t) { return std::vector<sem_type>{T(t[0], T(t[1], T(t[2], A)))}; },
      [m](const auto& t, const auto& v) {
        const auto& alg = m->algebra();
        grade fg = alg.combine(t[0], t[1]), gh = alg.combine(t[1], t[2]);
        value lhs = m->mu(fg, t[2], m->mu(t[0], t[1], v[0]));
        grade g = t[1], h = t[2];
        value rhs = m->mu(t[0], gh, m->fmap(t[0], [m, g, h](const value& x) { return m->mu(g, h, x); }, v[0]));
        return same(lhs, rhs);
      },
      cfg));

  out.push_back(run_law(
      "fmap_identity", name, ix.singles, [&](const auto& t) { return std::vector<sem_type>{T(t[0], A)}; },
      [m](const auto& t, const auto& v) { return same(m->fmap(t[0], [](const value& x) { return x; }, v[0]), v[0]); },
      cfg));

  out.push_back(run_law(
      "fmap_composition", name, ix.singles,
      [&](const auto& t) { return std::vector<sem_type>{T(t[0], A), bool_endo(), bool_endo()}; },
      [m](const auto& t, const auto& v) {
        value f = v[1], g = v[2];
        value lhs = m->fmap(t[0], [f, g](const value& x) { return f(g(x)); }, v[0]);
        value rhs = m->fmap(t[0], [f](const value& x) { return f(x); },
                            m->fmap(t[0], [g](const value& x) { return g(x); }, v[0]));
        return same(lhs, rhs);
      },
      cfg));

  // sub-effecting
  tuple_list ordered_singles, ordered_pairs, chains;
  if (alg.has_order()) {
    for (const auto& s : ix.singles) {
      if (m->iota_defined(s[0], s[0])) ordered_singles.push_back(s);
    }
    auto carrier = alg.carrier(cfg.budget);
    for (const auto& x : carrier) {
      for (const auto& y : carrier) {
        if (!m->iota_defined(x, y)) continue;
        ordered_pairs.push_back({x, y});
        for (const auto& z : carrier) {
          if (m->iota_defined(y, z) && m->iota_defined(x, z)) chains.push_back({x, y, z});
        }
      }
    }
  }
  auto iota_report = [&](law_report r) {
    if (!alg.has_order()) r.detail = "index algebra " + alg.name() + " has no order";
    return r;
  };
  out.push_back(iota_report(run_law(
      "iota_identity", name, ordered_singles, [&](const auto& t) { return std::vector<sem_type>{T(t[0], A)}; },
      [m](const auto& t, const auto& v) { return same(m->iota(t[0], t[0], v[0]), v[0]); }, cfg)));

  out.push_back(iota_report(run_law(
      "iota_composition", name, chains, [&](const auto& t) { return std::vector<sem_type>{T(t[0], A)}; },
      [m](const auto& t, const auto& v) {
        return same(m->iota(t[1], t[2], m->iota(t[0], t[1], v[0])), m->iota(t[0], t[2], v[0]));
      },
      cfg)));

  out.push_back(iota_report(run_law(
      "iota_naturality", name, ordered_pairs,
      [&](const auto& t) { return std::vector<sem_type>{T(t[0], A), bool_endo()}; },
      [m](const auto& t, const auto& v) {
        value f = v[1];
        auto fn = [f](const value& x) { return f(x); };
        return same(m->iota(t[0], t[1], m->fmap(t[0], fn, v[0])), m->fmap(t[1], fn, m->iota(t[0], t[1], v[0])));
      },
      cfg)));

  // strength
  out.push_back(run_law(
      "strength_unit", name, {{one}}, [&](const auto&) { return std::vector<sem_type>{A, A}; },
      [m, one](const auto&, const auto& v) {
        return same(m->strength(one, v[0], m->eta(v[1])), m->eta(value::pair(v[0], v[1])));
      },
      cfg));

  out.push_back(run_law(
      "strength_naturality", name, ix.singles,
      [&](const auto& t) { return std::vector<sem_type>{A, T(t[0], A), bool_endo()}; },
      [m](const auto& t, const auto& v) {
        value f = v[2];
        value lhs = m->strength(t[0], v[0], m->fmap(t[0], [f](const value& x) { return f(x); }, v[1]));
        value rhs = m->fmap(
            t[0], [f](const value& p) { return value::pair(p.first(), f(p.second())); }, m->strength(t[0], v[0], v[1]));
        return same(lhs, rhs);
      },
      cfg));

  out.push_back(run_law(
      "strength_mu", name, ix.pairs, [&](const auto& t) { return std::vector<sem_type>{A, T(t[0], T(t[1], A))}; },
      [m](const auto& t, const auto& v) {
        grade fg = m->algebra().combine(t[0], t[1]);
        grade g = t[1];
        value lhs = m->strength(fg, v[0], m->mu(t[0], t[1], v[1]));
        value inner = m->fmap(
            t[0], [m, g](const value& p) { return m->strength(g, p.first(), p.second()); },
            m->strength(t[0], v[0], v[1]));
        return same(lhs, m->mu(t[0], t[1], inner));
      },
      cfg));

  // iota against mu: reported, not required
  tuple_list quads;
  for (const auto& a : ordered_pairs) {
    for (const auto& b : ordered_pairs) {
      auto lo = try_combine(alg, a[0], b[0]);
      auto hi = try_combine(alg, a[1], b[1]);
      if (lo && hi && m->iota_defined(*lo, *hi)) quads.push_back({a[0], b[0], a[1], b[1]});
    }
  }
  law_report mono = run_law(
      "iota_mu_naturality", name, quads, [&](const auto& t) { return std::vector<sem_type>{T(t[0], T(t[1], A))}; },
      [m](const auto& t, const auto& v) {
        const auto& alg = m->algebra();
        grade g = t[1], g2 = t[3];
        value lhs = m->iota(alg.combine(t[0], t[1]), alg.combine(t[2], t[3]), m->mu(t[0], t[1], v[0]));
        value inner = m->fmap(t[0], [m, g, g2](const value& x) { return m->iota(g, g2, x); }, v[0]);
        return same(lhs, m->mu(t[2], t[3], m->iota(t[0], t[2], inner)));
      },
      cfg);
  mono.informational = true;
  out.push_back(std::move(mono));
  return out;
}

////////////////////////////////////////////////////////////////////////////////
// state equations
////////////////////////////////////////////////////////////////////////////////

std::vector<law_report> check_state_laws(const monad_ptr& m, const signature& sig, const harness_config& cfg) {
  auto mem = std::dynamic_pointer_cast<const memory_monad>(m);
  if (!mem) return {};
  const std::string name = m->name();
  tuple_list regions;
  for (const auto& [r, _] : sig.regions) regions.push_back({grade(token_set{effect_token::wr(r)})});
  auto region_of = [](const std::vector<grade>& t) { return t[0].tokens().begin()->name; };
  auto region_type = [&sig, region_of](const std::vector<grade>& t) { return sem_of(sig.regions.at(region_of(t))); };
  std::vector<law_report> out;

  out.push_back(run_law(
      "put_put", name, regions,
      [&](const auto& t) { return std::vector<sem_type>{region_type(t), region_type(t)}; },
      [m, region_of](const auto& t, const auto& v) {
        effect_token w = effect_token::wr(region_of(t));
        grade W = t[0];
        value second = v[1];
        value lhs = m->mu(W, W, m->fmap(W, [m, w, second](const value&) { return m->perform(w, second); },
                                        m->perform(w, v[0])));
        return same(lhs, m->perform(w, v[1]));
      },
      cfg));

  out.push_back(run_law(
      "put_get", name, regions, [&](const auto& t) { return std::vector<sem_type>{region_type(t)}; },
      [m, region_of](const auto& t, const auto& v) {
        std::string r = region_of(t);
        effect_token w = effect_token::wr(r), rd = effect_token::rd(r);
        grade W = t[0], R = grade(token_set{rd}), RW = grade(token_set{rd, w});
        value written = m->perform(w, v[0]);
        value lhs = m->mu(W, R, m->fmap(W, [m, rd](const value&) { return m->perform(rd, value::unit()); }, written));
        value val = v[0];
        value rhs = m->iota(W, RW, m->fmap(W, [val](const value&) { return val; }, written));
        return same(lhs, rhs);
      },
      cfg));

  // Writing back what was read leaves every store unchanged.
  out.push_back(run_law(
      "get_put", name, regions, [&](const auto&) { return std::vector<sem_type>{}; },
      [m, mem, region_of](const auto& t, const auto&) {
        std::string r = region_of(t);
        effect_token w = effect_token::wr(r), rd = effect_token::rd(r);
        grade W = t[0], R = grade(token_set{rd}), RW = grade(token_set{rd, w});
        value lhs = m->mu(R, W, m->fmap(R, [m, w](const value& x) { return m->perform(w, x); },
                                        m->perform(rd, value::unit())));
        law_outcome o;
        const sem_type stores = mem->store_type(RW);
        for (const auto& store : enumerate(stores, 1 << 16)) {
          observation obs = m->observe(RW, lhs, run_inputs{{}, store.fields()});
          auto after = store.fields();
          for (const auto& [k, val] : obs.writes) after.insert_or_assign(k, val);
          value final_store = value::record(std::move(after));
          if (!equal(final_store, store) || !equal(obs.result, value::unit())) {
            o.ok = false;
            o.lhs = final_store;
            o.rhs = store;
            o.note = "store changed by writing back the value read";
            return o;
          }
        }
        return o;
      },
      cfg));
  return out;
}

////////////////////////////////////////////////////////////////////////////////
// comonad laws
////////////////////////////////////////////////////////////////////////////////

std::vector<law_report> check_indexed_comonad_laws(const comonad_ptr& c, const harness_config& cfg) {
  const effect_algebra& alg = c->algebra();
  const std::string name = c->name();
  const grade one = alg.unit();
  const sem_type& A = bool_t();
  const sem_type B = sem_type::int_mod(4);
  const sem_type B_endo = sem_type::function(B, B);
  index_space ix = indices_of(alg, cfg.budget);
  auto D = [c](const grade& f, const sem_type& a) { return c->carrier_of(f, a); };
  std::vector<law_report> out;

  out.push_back(run_law(
      "counit_left", name, ix.singles, [&](const auto& t) { return std::vector<sem_type>{D(t[0], A)}; },
      [c, one](const auto& t, const auto& v) {
        return same(c->fmap(t[0], [c](const value& x) { return c->epsilon(x); }, c->delta(t[0], one, v[0])), v[0]);
      },
      cfg));

  out.push_back(run_law(
      "counit_right", name, ix.singles, [&](const auto& t) { return std::vector<sem_type>{D(t[0], A)}; },
      [c, one](const auto& t, const auto& v) { return same(c->epsilon(c->delta(one, t[0], v[0])), v[0]); }, cfg));

  out.push_back(run_law(
      "coassociativity", name, ix.triples,
      [&](const auto& t) {
        const auto& alg = c->algebra();
        return std::vector<sem_type>{D(alg.combine(alg.combine(t[0], t[1]), t[2]), A)};
      },
      [c](const auto& t, const auto& v) {
        const auto& alg = c->algebra();
        grade g = t[1], h = t[2];
        value lhs = c->fmap(t[0], [c, g, h](const value& x) { return c->delta(g, h, x); },
                            c->delta(t[0], alg.combine(t[1], t[2]), v[0]));
        value rhs = c->delta(t[0], t[1], c->delta(alg.combine(t[0], t[1]), t[2], v[0]));
        return same(lhs, rhs);
      },
      cfg));

  out.push_back(run_law(
      "fmap_identity", name, ix.singles, [&](const auto& t) { return std::vector<sem_type>{D(t[0], A)}; },
      [c](const auto& t, const auto& v) { return same(c->fmap(t[0], [](const value& x) { return x; }, v[0]), v[0]); },
      cfg));

  out.push_back(run_law(
      "fmap_composition", name, ix.singles,
      [&](const auto& t) { return std::vector<sem_type>{D(t[0], A), bool_endo(), bool_endo()}; },
      [c](const auto& t, const auto& v) {
        value f = v[1], g = v[2];
        value lhs = c->fmap(t[0], [f, g](const value& x) { return f(g(x)); }, v[0]);
        value rhs = c->fmap(t[0], [f](const value& x) { return f(x); },
                            c->fmap(t[0], [g](const value& x) { return g(x); }, v[0]));
        return same(lhs, rhs);
      },
      cfg));

  out.push_back(run_law(
      "mzip_typing", name, ix.pairs, [&](const auto& t) { return std::vector<sem_type>{D(t[0], A), D(t[1], B)}; },
      [c, A, B](const auto& t, const auto& v) {
        value z = c->mzip(t[0], t[1], v[0], v[1]);
        grade idx = c->zip_index(t[0], t[1]);
        law_outcome o;
        o.ok = conforms(z, c->carrier_of(idx, sem_type::product(A, B)));
        o.lhs = z;
        if (!o.ok) o.note = "result does not inhabit D " + idx.show() + " (bool x int4)";
        return o;
      },
      cfg));

  tuple_list all_triples;
  for (const auto& f : ix.singles) {
    for (const auto& g : ix.singles) {
      for (const auto& h : ix.singles) all_triples.push_back({f[0], g[0], h[0]});
    }
  }
  out.push_back(run_law(
      "mzip_associativity", name, all_triples,
      [&](const auto& t) { return std::vector<sem_type>{D(t[0], A), D(t[1], B), D(t[2], A)}; },
      [c](const auto& t, const auto& v) {
        grade fg = c->zip_index(t[0], t[1]), gh = c->zip_index(t[1], t[2]);
        grade left = c->zip_index(fg, t[2]), right = c->zip_index(t[0], gh);
        law_outcome o;
        if (left != right) {
          o.ok = false;
          o.note = "zip index is not associative: " + left.show() + " vs " + right.show();
          return o;
        }
        auto reassoc = [](const value& p) {
          return value::pair(p.first().first(), value::pair(p.first().second(), p.second()));
        };
        value lhs = c->fmap(left, reassoc, c->mzip(fg, t[2], c->mzip(t[0], t[1], v[0], v[1]), v[2]));
        value rhs = c->mzip(t[0], gh, v[0], c->mzip(t[1], t[2], v[1], v[2]));
        return same(lhs, rhs);
      },
      cfg));

  out.push_back(run_law(
      "mzip_naturality", name, ix.pairs,
      [&](const auto& t) { return std::vector<sem_type>{D(t[0], A), D(t[1], B), bool_endo(), B_endo}; },
      [c](const auto& t, const auto& v) {
        value f = v[2], g = v[3];
        value lhs = c->mzip(t[0], t[1], c->fmap(t[0], [f](const value& x) { return f(x); }, v[0]),
                            c->fmap(t[1], [g](const value& x) { return g(x); }, v[1]));
        value rhs = c->fmap(
            c->zip_index(t[0], t[1]), [f, g](const value& p) { return value::pair(f(p.first()), g(p.second())); },
            c->mzip(t[0], t[1], v[0], v[1]));
        return same(lhs, rhs);
      },
      cfg));

  out.push_back(run_law(
      "share_typing", name, ix.pairs,
      [&](const auto& t) { return std::vector<sem_type>{D(c->share_index(t[0], t[1]), A)}; },
      [c, A](const auto& t, const auto& v) {
        value s = c->share(t[0], t[1], v[0]);
        law_outcome o;
        o.ok = conforms(s, sem_type::product(c->carrier_of(t[0], A), c->carrier_of(t[1], A)));
        o.lhs = s;
        return o;
      },
      cfg));

  out.push_back(run_law(
      "share_naturality", name, ix.pairs,
      [&](const auto& t) { return std::vector<sem_type>{D(c->share_index(t[0], t[1]), A), bool_endo()}; },
      [c](const auto& t, const auto& v) {
        value f = v[1];
        auto fn = [f](const value& x) { return f(x); };
        value lhs = c->share(t[0], t[1], c->fmap(c->share_index(t[0], t[1]), fn, v[0]));
        value s = c->share(t[0], t[1], v[0]);
        return same(lhs, value::pair(c->fmap(t[0], fn, s.first()), c->fmap(t[1], fn, s.second())));
      },
      cfg));

  tuple_list weakenings;
  for (const auto& x : ix.singles) {
    for (const auto& y : ix.singles) {
      if (c->weaken_defined(x[0], y[0])) weakenings.push_back({x[0], y[0]});
    }
  }
  out.push_back(run_law(
      "weaken_naturality", name, weakenings, [&](const auto& t) { return std::vector<sem_type>{D(t[0], A), bool_endo()}; },
      [c](const auto& t, const auto& v) {
        value f = v[1];
        auto fn = [f](const value& x) { return f(x); };
        return same(c->weaken(t[0], t[1], c->fmap(t[0], fn, v[0])), c->fmap(t[1], fn, c->weaken(t[0], t[1], v[0])));
      },
      cfg));
  return out;
}

////////////////////////////////////////////////////////////////////////////////
// negative results
////////////////////////////////////////////////////////////////////////////////

fiber_report check_fiber_not_monad(const monad_ptr& m, const grade& f, std::uint64_t max_domain,
                                   std::uint64_t budget) {
  fiber_report r;
  r.instance = m->name();
  r.index = f;
  const effect_algebra& alg = m->algebra();
  const sem_type& A = bool_t();
  if (*cardinality(A) > max_domain) {
    r.applicable = false;
    r.detail = "value domain larger than the search bound";
    return r;
  }
  auto ff = try_combine(alg, f, f);
  std::function<value(const value&)> mu_fiber;
  if (ff && *ff == f) {
    mu_fiber = [m, f](const value& t) { return m->mu(f, f, t); };
  } else if (ff && alg.has_order() && m->iota_defined(*ff, f)) {
    grade g = *ff;
    mu_fiber = [m, f, g](const value& t) { return m->iota(g, f, m->mu(f, f, t)); };
  } else {
    r.applicable = false;
    r.detail = "F.F is not below F, so T F T F has no multiplication into T F";
    return r;
  }

  const sem_type TA = m->carrier_of(f, A);
  const auto& elems = enumerate(TA, 1 << 20);
  const value unit_v = value::unit();
  auto constant = [](const value& c) { return [c](const value&) { return c; }; };

  auto consider = [&](const value& e0, const value& e1) {
    ++r.candidates;
    auto eta = [e0, e1](const value& b) { return b.as_bool() ? e1 : e0; };
    // Natural transformations Id -> T F are fmap(const a) of one u : T F 1.
    value u = m->fmap(f, constant(unit_v), e1);
    bool natural = equal(m->fmap(f, constant(value::boolean(false)), u), e0) &&
                   equal(m->fmap(f, constant(value::boolean(true)), u), e1);
    if (natural) ++r.natural;
    bool right = true;
    for (const auto& t : elems) {
      if (!equal(mu_fiber(m->fmap(f, eta, t)), t)) {
        right = false;
        break;
      }
    }
    if (right) ++r.right_unit;
    if (!natural || !right) return;
    for (const auto& t : elems) {
      if (!equal(mu_fiber(m->fmap(f, constant(t), u)), t)) return;
    }
    ++r.both_units;
    if (!r.unit_found) r.unit_found = value::fun(A, eta);
  };

  if (mul_sat(elems.size(), elems.size()) <= budget) {
    for (const auto& e0 : elems) {
      for (const auto& e1 : elems) consider(e0, e1);
    }
  } else {
    // Too many functions bool -> T F bool; a unit must be natural, so search
    // the natural ones, which are exactly fmap(const b) of some u : T F 1.
    r.exhaustive = false;
    const sem_type T1 = m->carrier_of(f, sem_type::unit());
    for (const auto& u : enumerate(T1, budget)) {
      consider(m->fmap(f, constant(value::boolean(false)), u), m->fmap(f, constant(value::boolean(true)), u));
    }
  }
  r.detail = r.unit_found ? "unit found: " + show(*r.unit_found)
                          : "no eta : bool -> T " + f.show() + " bool satisfies both unit laws";
  return r;
}

std::vector<counit_search> search_unindexed_counit(std::size_t max_size) {
  std::vector<counit_search> out;
  for (std::size_t n = 0; n <= max_size; ++n) {
    counit_search s;
    s.size = n;
    // 1 + A as {0 = nothing, i + 1 = just i}; candidates are maps into A.
    std::uint64_t candidates = 1, endos = 1;
    for (std::size_t i = 0; i < n + 1; ++i) candidates *= n;
    for (std::size_t i = 0; i < n; ++i) endos *= n;
    s.candidates = candidates;
    std::vector<std::size_t> eps(n + 1), fn(n);
    for (std::uint64_t c = 0; c < candidates; ++c) {
      std::uint64_t k = c;
      for (auto& x : eps) {
        x = k % n;
        k /= n;
      }
      bool natural = true;
      for (std::uint64_t e = 0; e < endos && natural; ++e) {
        std::uint64_t j = e;
        for (auto& y : fn) {
          y = j % n;
          j /= n;
        }
        // eps (D f x) = f (eps x)
        natural = eps[0] == fn[eps[0]];
        for (std::size_t i = 0; i < n && natural; ++i) natural = eps[fn[i] + 1] == fn[eps[i + 1]];
      }
      if (!natural) continue;
      ++s.natural;
      bool lawful = true;
      for (std::size_t i = 0; i < n; ++i) lawful = lawful && eps[i + 1] == i;
      if (lawful) ++s.lawful;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<zip_candidate> search_zip_operations() {
  std::vector<zip_candidate> out;
  for (int op = 0; op < 16; ++op) {
    // bit (2a + b) holds op(a, b)
    auto apply = [op](bool a, bool b) { return ((op >> (2 * a + b)) & 1) != 0; };
    zip_candidate z;
    for (int i = 0; i < 4; ++i) z.table += apply(i >> 1, i & 1) ? 't' : 'f';
    z.associative = true;
    for (int i = 0; i < 8; ++i) {
      bool a = i & 4, b = i & 2, c = i & 1;
      if (apply(apply(a, b), c) != apply(a, apply(b, c))) z.associative = false;
    }
    // D (a v b)(A x B) is reachable from D a A x D b B for every A, B only
    // when a v b = t forces both components present.
    z.total = true;
    for (int i = 0; i < 4; ++i) {
      bool a = i >> 1, b = i & 1;
      if (apply(a, b) && !(a && b)) z.total = false;
    }
    z.preserves_unit = apply(true, true);
    out.push_back(z);
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////////
// mutants
////////////////////////////////////////////////////////////////////////////////

namespace {

class swapped_reader : public reader_monad {
 public:
  using reader_monad::reader_monad;
  std::string name() const override { return "reader/swapped-mu"; }
  value mu(const grade& f, const grade& g, const value& k) const override {
    auto f_fields = env_type(f).fields();
    auto g_fields = env_type(g).fields();
    return value::fun(env_type(alg_.combine(f, g)), [k, f_fields, g_fields](const value& x) {
      return k(x.restrict_to(g_fields))(x.restrict_to(f_fields));
    });
  }
};

class left_biased_memory : public memory_monad {
 public:
  using memory_monad::memory_monad;
  std::string name() const override { return "memory/left-biased-merge"; }

 protected:
  value merge_writes(const value& first, const value& second) const override {
    return memory_monad::merge_writes(second, first);
  }
};

class forgetful_memory : public memory_monad {
 public:
  using memory_monad::memory_monad;
  std::string name() const override { return "memory/hidden-writes"; }

 protected:
  value sequenced_store(const value& store, const grade& second, const value&) const override {
    return store.restrict_to(reads_of(second));
  }
};

class broken_delta : public partiality_comonad {
 public:
  std::string name() const override { return "partiality/broken-delta"; }
  value delta(const grade& f, const grade& g, const value& d) const override {
    if (live(f) && live(g)) return value::absent();
    return partiality_comonad::delta(f, g, d);
  }
};

class disjunctive_zip : public partiality_comonad {
 public:
  std::string name() const override { return "partiality/or-zip"; }
  grade zip_index(const grade& f, const grade& g) const override { return grade(live(f) || live(g)); }
  value mzip(const grade& f, const grade& g, const value& a, const value& b) const override {
    if (live(f) || live(g)) return value::pair(a, b);
    return value::absent();
  }
};

std::vector<law_report> monad_suite(const monad_ptr& m, const harness_config& cfg) {
  auto out = check_indexed_monad_laws(m, cfg);
  auto state = check_state_laws(m, harness_signature(), cfg);
  out.insert(out.end(), state.begin(), state.end());
  return out;
}

}  // namespace

std::vector<mutant> shipped_mutants() {
  const signature sig = harness_signature();
  return {
      {"swapped-reader-mu", "reader mu applies k to x|G and its result to x|F",
       [sig](const harness_config& cfg) { return monad_suite(std::make_shared<swapped_reader>(sig), cfg); }},
      {"broken-delta", "partiality delta(t, t) returns the one-point value",
       [](const harness_config& cfg) { return check_indexed_comonad_laws(std::make_shared<broken_delta>(), cfg); }},
      {"or-zip", "partiality mzip indexed by disjunction instead of conjunction",
       [](const harness_config& cfg) { return check_indexed_comonad_laws(std::make_shared<disjunctive_zip>(), cfg); }},
      {"left-biased-write-merge", "memory mu keeps the first computation's write on conflicts",
       [sig](const harness_config& cfg) { return monad_suite(std::make_shared<left_biased_memory>(sig), cfg); }},
      {"hidden-writes", "memory mu runs the second computation on the initial store",
       [sig](const harness_config& cfg) { return monad_suite(std::make_shared<forgetful_memory>(sig), cfg); }},
  };
}

mutant_report check_mutant(const mutant& m, const harness_config& cfg) {
  mutant_report r;
  r.name = m.name;
  for (auto& rep : m.run(cfg)) {
    if (rep.result == verdict::fail && !rep.informational) {
      r.caught = rep.witness.has_value() && rep.replay();
      r.failing = std::move(rep);
      break;
    }
  }
  return r;
}

////////////////////////////////////////////////////////////////////////////////
// reference interpreter
////////////////////////////////////////////////////////////////////////////////

namespace {

struct oracle_value;
using oracle_ptr = std::shared_ptr<const oracle_value>;
using oracle_env = std::map<std::string, oracle_ptr>;

struct oracle_value {
  enum class kind { base, pair, closure } k = kind::base;
  value base;
  oracle_ptr first, second;
  std::string param;
  const term* body = nullptr;
  oracle_env env;
};

oracle_ptr base_value(value v) {
  auto o = std::make_shared<oracle_value>();
  o->base = std::move(v);
  return o;
}

std::optional<value> to_value(const oracle_value& o) {
  switch (o.k) {
    case oracle_value::kind::base: return o.base;
    case oracle_value::kind::pair: {
      auto a = to_value(*o.first), b = to_value(*o.second);
      if (!a || !b) return std::nullopt;
      return value::pair(*a, *b);
    }
    case oracle_value::kind::closure: return std::nullopt;
  }
  return std::nullopt;
}

struct machine {
  std::map<std::string, value> store;
  std::vector<std::pair<std::string, value>> trace;
  const std::map<std::string, value>& params;

  value first_order(const oracle_ptr& o, const term& at) {
    auto v = to_value(*o);
    if (!v) throw error(error_kind::type, "stored or emitted value must be first-order", at.pos);
    return *v;
  }

  oracle_ptr eval(const term& e, const oracle_env& env) {
    using k = term::kind;
    switch (e.k) {
      case k::var: return env.at(e.name);
      case k::constant: return base_value(e.literal);
      case k::lam: {
        auto o = std::make_shared<oracle_value>();
        o->k = oracle_value::kind::closure;
        o->param = e.name;
        o->body = &e.child(0);
        o->env = env;
        return o;
      }
      case k::app: {
        oracle_ptr f = eval(e.child(0), env);
        oracle_ptr a = eval(e.child(1), env);
        oracle_env inner = f->env;
        inner.insert_or_assign(f->param, a);
        return eval(*f->body, inner);
      }
      case k::let: {
        oracle_ptr a = eval(e.child(0), env);
        oracle_env inner = env;
        inner.insert_or_assign(e.name, a);
        return eval(e.child(1), inner);
      }
      case k::pair: {
        auto o = std::make_shared<oracle_value>();
        o->k = oracle_value::kind::pair;
        o->first = eval(e.child(0), env);
        o->second = eval(e.child(1), env);
        return o;
      }
      case k::fst: return eval(e.child(0), env)->first;
      case k::snd: return eval(e.child(0), env)->second;
      case k::cond:
        return eval(e.child(0), env)->base.as_bool() ? eval(e.child(1), env) : eval(e.child(2), env);
      case k::ask: return base_value(params.at(e.name));
      case k::read: return base_value(store.at(e.name));
      case k::write:
        store.insert_or_assign(e.name, first_order(eval(e.child(0), env), e));
        return base_value(value::unit());
      case k::out:
        trace.emplace_back(e.name, first_order(eval(e.child(0), env), e));
        return base_value(value::unit());
    }
    throw error(error_kind::type, "unknown term former", e.pos);
  }
};

}  // namespace

oracle_result global_state_oracle(const signature& sig, const term& e, std::map<std::string, value> store,
                                  const std::map<std::string, value>& env) {
  for (const auto& [r, _] : sig.regions) {
    if (!store.contains(r)) throw error(error_kind::input_mismatch, "oracle store is missing region '" + r + "'");
  }
  machine mach{std::move(store), {}, env};
  oracle_ptr v = mach.eval(e, {});
  return {to_value(*v), std::move(mach.store), std::move(mach.trace)};
}

}  // namespace gradeff
