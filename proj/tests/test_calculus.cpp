#include <doctest.h>

#include "gradeff/calculus.hpp"
#include "term_gen.hpp"

using namespace gradeff;

namespace {

error_kind kind_of_failure(const std::string& src) {
  try {
    parse(src);
  } catch (const error& e) {
    return e.kind();
  }
  FAIL("expected a parse failure for: " << src);
  return error_kind::usage;
}

}  // namespace

TEST_CASE("declarations and a lambda over a parameter") {
  program p = parse("param p : int4; \\x:int4. ask p");
  CHECK(p.sig.params.at("p") == base_type::int4);
  REQUIRE(p.body->k == term::kind::lam);
  CHECK(p.body->name == "x");
  CHECK(p.body->child(0).k == term::kind::ask);
  CHECK(p.body->child(0).name == "p");
}

TEST_CASE("write of a boolean literal") {
  program p = parse("region r : bool; write r true");
  REQUIRE(p.body->k == term::kind::write);
  CHECK(p.body->name == "r");
  CHECK(p.body->child(0).k == term::kind::constant);
  CHECK(equal(p.body->child(0).literal, value::boolean(true)));
}

TEST_CASE("truncated lambda is a syntax error with a position") {
  try {
    parse("\\x:");
    FAIL("expected a syntax error");
  } catch (const error& e) {
    CHECK(e.kind() == error_kind::syntax);
    CHECK(e.pos().line == 1);
    CHECK(e.pos().col == 4);
  }
}

TEST_CASE("scope errors are raised at parse time") {
  CHECK(kind_of_failure("ask p") == error_kind::scope);
  CHECK(kind_of_failure("param p : int4; read p") == error_kind::scope);
  CHECK(kind_of_failure("x") == error_kind::scope);
  CHECK(kind_of_failure("region r : int4; region r : bool; 1") == error_kind::scope);
  CHECK(kind_of_failure("1; _") == error_kind::scope);
}

TEST_CASE("syntax errors") {
  CHECK(kind_of_failure("let x = 1 2") == error_kind::syntax);
  CHECK(kind_of_failure("(1, 2") == error_kind::syntax);
  CHECK(kind_of_failure("if true then 1") == error_kind::syntax);
  CHECK(kind_of_failure("1 )") == error_kind::syntax);
  CHECK(kind_of_failure("\\let:int4. 1") == error_kind::syntax);
}

TEST_CASE("canonical printing") {
  auto id = term::lam("x", type_expr::make_base(base_type::int4), term::var("x"));
  CHECK(pretty(*id) == "\\x:int4. x");
  signature sig;
  auto fa = parse_term("(\\f:int4. f) 1", sig);
  CHECK(pretty(*term::app(term::var("f"), term::var("a"))) == "f a");
  CHECK(pretty(*term::pair(term::constant(value::unit()), term::constant(value::unit()))) == "(unit, unit)");
  CHECK(pretty(*fa) == "(\\f:int4. f) 1");
}

TEST_CASE("printing brackets only where needed") {
  program p = parse("region r : int4; write r (read r)");
  CHECK(pretty(*p.body) == "write r (read r)");
  program q = parse("param p : int4; (\\x:int4 -> {ip p} int4. x) (\\y:int4. ask p)");
  CHECK(pretty(*q.body) == "(\\x:int4 -> {ip p} int4. x) (\\y:int4. ask p)");
  program s = parse("tag a : bool; out a true; out a false; 1");
  CHECK(pretty(*s.body) == "out a true; out a false; 1");
  program t = parse("(let x = 1 in x); 2");
  CHECK(pretty(*t.body) == "(let x = 1 in x); 2");
  program u = parse("fst (snd ((1, 2), (true, 3)))");
  CHECK(pretty(*u.body) == "fst (snd ((1, 2), (true, 3)))");
}

TEST_CASE("surface conveniences") {
  program p = parse("# comment\nλx:int4. x  # trailing");
  CHECK(p.body->k == term::kind::lam);
  CHECK(equal(parse("6").body->literal, value::int_mod(2)));
  program s = parse("1; 2");
  CHECK(s.body->k == term::kind::let);
  CHECK(s.body->sequence);
}

TEST_CASE("types print and parse back") {
  for (const char* src : {"int4", "(int4, bool)", "int4 -> {} int4", "int4 -> {rd r, wr r} (bool, unit)",
                          "(int4 -> {t} int4) -> {f} bool", "int4 -> {out a, out a} int4 -> {} int4"}) {
    CHECK(parse_type(src)->show() == src);
  }
}

TEST_CASE("program printing lists declarations first") {
  program p = parse("tag a : bool; param p : int4; region r : int4; 1");
  CHECK(pretty(p) == "param p : int4;\nregion r : int4;\ntag a : bool;\n1");
}

TEST_CASE("free variables and capture-avoiding substitution") {
  signature sig;
  auto body = parse_term("\\y:int4. \\x:int4. (x, y)", sig);
  term_ptr open = body->kids[0];  // \x:int4. (x, y) with y free
  CHECK(free_vars(*open) == std::set<std::string>{"y"});
  // substituting x for y must rename the inner binder
  auto r = substitute(open, "y", term::var("x"));
  REQUIRE(r->k == term::kind::lam);
  CHECK(r->name != "x");
  CHECK(free_vars(*r) == std::set<std::string>{"x"});
  CHECK(r->child(0).child(0).name == r->name);
  CHECK(r->child(0).child(1).name == "x");
  // shadowed occurrences are untouched
  auto s = substitute(parse_term("\\y:int4. y", sig), "y", term::constant(value::int_mod(1)));
  CHECK(pretty(*s) == "\\y:int4. y");
}

TEST_CASE("lets are numbered in source order") {
  program p = parse("let a = (let b = 1 in b) in let c = 2 in a");
  auto ids = number_lets(*p.body);
  REQUIRE(ids.size() == 3);
  CHECK(ids.at(p.body.get()) == 0);
  CHECK(ids.at(p.body->kids[0].get()) == 1);
  CHECK(ids.at(p.body->kids[1].get()) == 2);
}

TEST_CASE("syntactic values") {
  signature sig;
  CHECK(is_value(*parse_term("(1, \\x:int4. x)", sig)));
  CHECK_FALSE(is_value(*parse_term("fst (1, 2)", sig)));
}

TEST_CASE("parse and print round-trip on generated terms") {
  testing::term_generator gen(testing::test_signature(), 20241015);
  const testing::prims kinds[] = {testing::prims::none, testing::prims::params, testing::prims::memory,
                                  testing::prims::trace};
  int checked = 0;
  for (int i = 0; i < 600; ++i) {
    testing::gen_options opt;
    opt.primitives = kinds[i % 4];
    opt.higher_order_params = i % 3 == 0;
    opt.max_depth = 2 + i % 4;
    term_ptr e = gen.closed(opt);
    std::string text = pretty(*e);
    term_ptr back = parse_term(text, gen.sig());
    CAPTURE(text);
    CHECK(*back == *e);
    CHECK(pretty(*back) == text);
    ++checked;
  }
  CHECK(checked >= 500);
}
