#include <doctest.h>

#include "gradeff/calculus.hpp"
#include "gradeff/effect_inference.hpp"
#include "term_gen.hpp"

using namespace gradeff;

namespace {

const effect_token ip_p = effect_token::ip("p");
const effect_token rd_r = effect_token::rd("r");
const effect_token wr_s = effect_token::wr("s");

grade set(std::initializer_list<effect_token> ts) { return grade(token_set(ts)); }

effect_algebra full_powerset(const signature& sig) {
  auto toks = sig.effect_tokens();
  return powerset_algebra({toks.begin(), toks.end()});
}

effect_judgment infer(const std::string& src, const effect_algebra* alg = nullptr) {
  program p = parse(src);
  return infer_effect(p.sig, alg ? *alg : full_powerset(p.sig), {}, p.body);
}

// Pointwise join of latents; shapes are assumed equal.
obj_type join_oracle(const obj_type& a, const obj_type& b, const effect_algebra& alg) {
  switch (a.tag()) {
    case obj_type::kind::product:
      return obj_type::product(join_oracle(a.first(), b.first(), alg), join_oracle(a.second(), b.second(), alg));
    case obj_type::kind::arrow:
      return obj_type::arrow(a.domain(), alg.join(a.latent(), b.latent()), join_oracle(a.codomain(), b.codomain(), alg));
    default: return a;
  }
}

// Independent reading of the rules: an effect is what the evaluation order
// runs, in order; a lambda's latent is its body's effect.
std::pair<obj_type, grade> oracle(const signature& sig, const effect_algebra& alg, const type_context& ctx,
                                  const term& e) {
  auto seq = [&](const grade& a, const grade& b) { return alg.combine(a, b); };
  const grade none = alg.unit();
  switch (e.k) {
    case term::kind::var: return {ctx.at(e.name), none};
    case term::kind::constant: return {literal_type(e.literal), none};
    case term::kind::lam: {
      obj_type dom = resolve(*e.annotation, alg, sig);
      type_context inner = ctx;
      inner.insert_or_assign(e.name, dom);
      auto [t, f] = oracle(sig, alg, inner, e.child(0));
      return {obj_type::arrow(dom, f, t), none};
    }
    case term::kind::app: {
      auto [ft, ff] = oracle(sig, alg, ctx, e.child(0));
      auto [at, af] = oracle(sig, alg, ctx, e.child(1));
      return {ft.codomain(), seq(seq(ff, af), ft.latent())};
    }
    case term::kind::let: {
      auto [bt, bf] = oracle(sig, alg, ctx, e.child(0));
      type_context inner = ctx;
      inner.insert_or_assign(e.name, bt);
      auto [t, f] = oracle(sig, alg, inner, e.child(1));
      return {t, seq(bf, f)};
    }
    case term::kind::pair: {
      auto [at, af] = oracle(sig, alg, ctx, e.child(0));
      auto [bt, bf] = oracle(sig, alg, ctx, e.child(1));
      return {obj_type::product(at, bt), seq(af, bf)};
    }
    case term::kind::fst:
    case term::kind::snd: {
      auto [t, f] = oracle(sig, alg, ctx, e.child(0));
      return {e.k == term::kind::fst ? t.first() : t.second(), f};
    }
    case term::kind::cond: {
      auto [ct, cf] = oracle(sig, alg, ctx, e.child(0));
      auto [tt, tf] = oracle(sig, alg, ctx, e.child(1));
      auto [et, ef] = oracle(sig, alg, ctx, e.child(2));
      return {join_oracle(tt, et, alg), seq(cf, alg.join(tf, ef))};
    }
    case term::kind::ask: return {obj_type::of(sig.params.at(e.name)), *alg.primitive(effect_token::ip(e.name))};
    case term::kind::read: return {obj_type::of(sig.regions.at(e.name)), *alg.primitive(effect_token::rd(e.name))};
    case term::kind::write: {
      auto [t, f] = oracle(sig, alg, ctx, e.child(0));
      return {obj_type::unit(), seq(f, *alg.primitive(effect_token::wr(e.name)))};
    }
    case term::kind::out: {
      auto [t, f] = oracle(sig, alg, ctx, e.child(0));
      return {obj_type::unit(), seq(f, *alg.primitive(effect_token::out(e.name)))};
    }
  }
  throw error(error_kind::type, "unreachable");
}

const derivation* find_rule(const derivation& d, const std::string& rule) {
  if (d.rule == rule) return &d;
  for (const auto& c : d.children) {
    if (auto r = find_rule(*c, rule)) return r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("a lambda defers its body's effect to the arrow") {
  auto j = infer("param p : int4; \\x:int4. ask p");
  CHECK(j.type().show() == "int4 -> {ip p} int4");
  CHECK(j.effect() == set({}));
}

TEST_CASE("let sequences the effects of both parts") {
  auto j = infer("region r : int4; region s : int4; let x = read r in write s x");
  CHECK(j.type() == obj_type::unit());
  CHECK(j.effect() == set({rd_r, wr_s}));
}

TEST_CASE("branches are coerced up to their join") {
  auto j = infer("param p : int4; region r : int4; if true then read r else ask p");
  CHECK(j.type() == obj_type::int4());
  CHECK(j.effect() == set({rd_r, ip_p}));
  int iotas = 0;
  for (const auto& c : j.root->coercions) {
    if (c.effect) {
      ++iotas;
      CHECK(c.effect->second == set({rd_r, ip_p}));
    }
  }
  CHECK(iotas == 2);
}

TEST_CASE("checking against a declared effect") {
  program p = parse("param p : int4; region r : int4; ask p");
  auto alg = full_powerset(p.sig);
  auto j = infer_effect(p.sig, alg, {}, p.body);
  CHECK(check_against_annotation(j, set({ip_p}), alg).effect() == set({ip_p}));
  try {
    check_against_annotation(j, set({}), alg);
    FAIL("expected the effect to escape");
  } catch (const error& e) {
    CHECK(e.kind() == error_kind::effect_escape);
  }
  auto wider = check_against_annotation(j, set({ip_p, rd_r}), alg);
  CHECK(wider.effect() == set({ip_p, rd_r}));
  CHECK(wider.root->rule == "sub");
  CHECK(replay(p.sig, alg, {}, *wider.root).second == set({ip_p, rd_r}));
}

TEST_CASE("application runs function, argument, then the latent") {
  auto alg = trace_algebra({"a", "b"}, 4);
  auto j = infer("tag a : int4; tag b : int4; (out a 1; \\x:int4. out b x; x) (out a 2; 3)", &alg);
  CHECK(j.effect() == grade(tag_trace{"a", "a", "b"}));
}

TEST_CASE("arguments may have smaller latents than the parameter") {
  auto j = infer("param p : int4; (\\f:int4 -> {ip p} int4. f 1) (\\y:int4. y)");
  CHECK(j.effect() == set({ip_p}));
  const derivation* app = find_rule(*j.root, "app");
  REQUIRE(app != nullptr);
  bool coerced = false;
  for (const auto& c : app->coercions) coerced = coerced || (c.site == "argument" && c.type.has_value());
  CHECK(coerced);
}

TEST_CASE("latents larger than the parameter allows are rejected") {
  CHECK_THROWS_AS(infer("param p : int4; (\\f:int4 -> {} int4. f 1) (\\y:int4. ask p)"), error);
}

TEST_CASE("type errors") {
  auto kind_of = [](const std::string& src) {
    try {
      infer(src);
    } catch (const error& e) {
      return e.kind();
    }
    return error_kind::usage;
  };
  CHECK(kind_of("1 2") == error_kind::type);
  CHECK(kind_of("if 1 then 2 else 3") == error_kind::type);
  CHECK(kind_of("fst 1") == error_kind::type);
  CHECK(kind_of("region r : int4; write r true") == error_kind::type);
  CHECK(kind_of("if true then 1 else unit") == error_kind::type);
  CHECK(kind_of("\\x:int4 -> {rd r} int4. x") == error_kind::scope);
}

TEST_CASE("conditionals need an order on the algebra") {
  auto alg = trace_algebra({"a"}, 3);
  try {
    infer("tag a : int4; if true then out a 1 else unit", &alg);
    FAIL("expected a lattice error");
  } catch (const error& e) {
    CHECK(e.kind() == error_kind::no_lattice);
  }
  // even equal branch effects: the rule is stated with a join
  CHECK_THROWS_AS(infer("tag a : int4; if true then out a 1 else out a 2", &alg), error);
}

TEST_CASE("primitives absent from the algebra are rejected") {
  program p = parse("param p : int4; region r : int4; read r");
  auto alg = powerset_algebra({ip_p});
  CHECK_THROWS_AS(infer_effect(p.sig, alg, {}, p.body), error);
}

TEST_CASE("syntactic values are pure") {
  testing::term_generator gen(testing::test_signature(), 11);
  auto alg = full_powerset(gen.sig());
  for (int i = 0; i < 200; ++i) {
    testing::gen_options opt;
    opt.primitives = testing::prims::memory;
    term_ptr e = gen.closed(opt);
    if (!is_value(*e)) continue;
    auto j = testing::try_infer(gen.sig(), alg, {}, e);
    if (j) CHECK(j->effect() == alg.unit());
  }
}

TEST_CASE("inference agrees with the structural oracle and the result is least") {
  testing::term_generator gen(testing::test_signature(), 99);
  auto alg = full_powerset(gen.sig());
  auto carrier = alg.carrier(1 << 10);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    testing::gen_options opt;
    opt.primitives = i % 2 ? testing::prims::params : testing::prims::memory;
    opt.higher_order_params = i % 3 == 0;
    term_ptr e = gen.closed(opt);
    auto j = testing::try_infer(gen.sig(), alg, {}, e);
    if (!j) continue;
    CAPTURE(pretty(*e));
    auto [t, f] = oracle(gen.sig(), alg, {}, *e);
    CHECK(j->effect() == f);
    CHECK(j->type() == t);
    CHECK(replay(gen.sig(), alg, {}, *j->root) == std::make_pair(j->type(), j->effect()));
    // least: every grade accepting the term lies above the inferred one
    for (const auto& g : carrier) {
      bool accepted = true;
      try {
        check_against_annotation(*j, g, alg);
      } catch (const error&) {
        accepted = false;
      }
      CHECK(accepted == alg.leq(f, g));
    }
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("trace inference agrees with the oracle") {
  testing::term_generator gen(testing::test_signature(), 5);
  auto alg = trace_algebra({"a", "b"}, 8);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    testing::gen_options opt;
    opt.primitives = testing::prims::trace;
    opt.conditionals = false;
    term_ptr e = gen.closed(opt);
    auto j = testing::try_infer(gen.sig(), alg, {}, e);
    if (!j) continue;
    CAPTURE(pretty(*e));
    CHECK(j->effect() == oracle(gen.sig(), alg, {}, *e).second);
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("replay rejects a tampered conclusion") {
  program p = parse("param p : int4; ask p");
  auto alg = full_powerset(p.sig);
  auto j = infer_effect(p.sig, alg, {}, p.body);
  auto bad = std::make_shared<derivation>(*j.root);
  bad->effect = set({});
  CHECK_THROWS_AS(replay(p.sig, alg, {}, *bad), error);
}
