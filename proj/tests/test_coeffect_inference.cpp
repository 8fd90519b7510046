#include <doctest.h>

#include <functional>

#include "gradeff/calculus.hpp"
#include "gradeff/coeffect_inference.hpp"
#include "term_gen.hpp"

using namespace gradeff;

namespace {

// Parses a term open in `ctx` by binding the context with lambdas first.
term_ptr parse_open(const std::string& src, const type_context& ctx) {
  std::string wrapped;
  for (const auto& [x, t] : ctx) wrapped += "\\" + x + ":" + t.show() + ". ";
  term_ptr e = parse_term(wrapped + src, signature{});
  for (std::size_t i = 0; i < ctx.size(); ++i) e = e->kids[0];
  return e;
}

coeffect_judgment co(const std::string& src, const type_context& ctx = {}, lam_split policy = lam_split::duplicate) {
  return infer_coeffect(signature{}, ctx, parse_open(src, ctx), policy);
}

void walk(const coeffect_derivation& d, const std::function<void(const coeffect_derivation&)>& f) {
  f(d);
  for (const auto& c : d.children) walk(*c, f);
}

}  // namespace

TEST_CASE("the identity demands its argument") {
  auto j = co("\\x:int4. x");
  CHECK(j.coeffect());
  CHECK(j.type().show() == "int4 -> {t} int4");
  CHECK(j.root->immediate == true);
  CHECK(j.root->latent == true);
}

TEST_CASE("a constant demands nothing") {
  CHECK_FALSE(co("unit").coeffect());
  CHECK_FALSE(co("(1, true)").coeffect());
  CHECK(co("y", {{"y", obj_type::int4()}}).coeffect());
}

TEST_CASE("a binding whose variable is never used is dead") {
  auto j = co("let y = 1 in 3");
  REQUIRE(j.liveness.size() == 1);
  CHECK(j.liveness[0].binder == "y");
  CHECK_FALSE(j.liveness[0].live);
  CHECK_FALSE(j.coeffect());
  auto k = co("let y = 1 in y");
  CHECK(k.liveness[0].live);
}

TEST_CASE("a dead binding hides the demand of its bound expression") {
  auto j = co("let y = z in 3", {{"z", obj_type::int4()}});
  CHECK_FALSE(j.coeffect());
  auto k = co("let y = z in y", {{"z", obj_type::int4()}});
  CHECK(k.coeffect());
}

TEST_CASE("an argument is demanded only through a live latent") {
  type_context ctx{{"z", obj_type::int4()}};
  CHECK_FALSE(co("(\\x:int4. 1) z", ctx).coeffect());
  CHECK(co("(\\x:int4. x) z", ctx).coeffect());
}

TEST_CASE("liveness entries follow let numbering") {
  auto j = co("let a = (let b = 1 in b) in let c = 2 in a");
  REQUIRE(j.liveness.size() == 3);
  CHECK(j.liveness[0].binder == "a");
  CHECK(j.liveness[0].live);
  CHECK(j.liveness[1].binder == "b");
  CHECK(j.liveness[1].live);
  CHECK(j.liveness[2].binder == "c");
  // the body of c demands its context (through a), so c is live too:
  // liveness is a single flag for the whole context
  CHECK(j.liveness[2].live);
}

TEST_CASE("the latent-max split keeps lambdas immediately live") {
  auto j = co("\\x:int4. 1", {}, lam_split::latent_max);
  CHECK(j.coeffect());
  CHECK(j.type().show() == "int4 -> {f} int4");
  auto d = co("\\x:int4. 1");
  CHECK_FALSE(d.coeffect());
}

TEST_CASE("branches are weakened to a common type") {
  auto j = co("if true then \\x:int4. x else \\x:int4. 1");
  CHECK(j.type().show() == "int4 -> {t} int4");
  bool weakened = false;
  for (const auto& c : j.root->coercions) weakened = weakened || c.type.has_value();
  CHECK(weakened);
}

TEST_CASE("effect primitives have no coeffect reading") {
  program p = parse("param p : int4; ask p");
  try {
    infer_coeffect(p.sig, {}, p.body);
    FAIL("expected unsupported primitive");
  } catch (const error& e) {
    CHECK(e.kind() == error_kind::unsupported_primitive);
  }
}

TEST_CASE("every split recombines to the body demand") {
  testing::term_generator gen(testing::test_signature(), 3);
  type_context ctx{{"y", obj_type::int4()}, {"z", obj_type::boolean()}};
  int splits = 0;
  for (int i = 0; i < 300; ++i) {
    testing::gen_options opt;
    opt.max_depth = 3 + i % 3;
    auto e = gen.term_of(ctx, gen.shape(2, false), opt);
    for (auto policy : {lam_split::duplicate, lam_split::latent_max}) {
      coeffect_judgment j;
      try {
        j = infer_coeffect(gen.sig(), ctx, e, policy);
      } catch (const error&) {
        continue;
      }
      walk(*j.root, [&](const coeffect_derivation& d) {
        if (!d.immediate) return;
        const auto& body = d.rule == "lam" ? *d.children.at(0) : *d.children.at(1);
        CHECK((*d.immediate && *d.latent) == body.demand);
        ++splits;
      });
    }
  }
  CHECK(splits > 100);
}
