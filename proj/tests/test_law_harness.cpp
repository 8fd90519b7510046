#include <doctest.h>

#include "gradeff/law_harness.hpp"

using namespace gradeff;

namespace {

value i4(int k) { return value::int_mod(k); }

void require_all_pass(const std::vector<law_report>& reports) {
  REQUIRE_FALSE(reports.empty());
  for (const auto& r : reports) {
    CAPTURE(r.law);
    CAPTURE(r.detail);
    CHECK(passed(r.result));
  }
}

signature one_region() {
  signature sig;
  sig.declare(signature::name_kind::region, "r", base_type::boolean);
  return sig;
}

}  // namespace

TEST_CASE("verdict names") {
  CHECK(to_string(verdict::sampled_pass) == "sampled-pass");
  CHECK(passed(verdict::not_applicable));
  CHECK_FALSE(passed(verdict::fail));
  CHECK_FALSE(passed(verdict::budget_exceeded));
}

TEST_CASE("run_law exhausts small spaces and samples large ones") {
  auto dom = [](const std::vector<grade>&) { return std::vector<sem_type>{sem_type::int_mod(4), sem_type::int_mod(4)}; };
  auto commutes = [](const std::vector<grade>&, const std::vector<value>& v) {
    return law_outcome{(v[0].residue() + v[1].residue()) % 4 == (v[1].residue() + v[0].residue()) % 4, {}, {}, ""};
  };
  std::vector<std::vector<grade>> one{{}};
  auto full = run_law("add_commutes", "test", one, dom, commutes, harness_config{});
  CHECK(full.result == verdict::pass);
  CHECK(full.cases == 16);
  CHECK(full.space == 16);

  harness_config tight;
  tight.budget = 4;
  tight.sample_cases = 10;
  auto sampled = run_law("add_commutes", "test", one, dom, commutes, tight);
  CHECK(sampled.result == verdict::sampled_pass);
  CHECK(sampled.cases == 16);  // at least 16 per sampled tuple
}

TEST_CASE("run_law records a replayable witness") {
  auto dom = [](const std::vector<grade>&) { return std::vector<sem_type>{sem_type::int_mod(4)}; };
  auto small = [](const std::vector<grade>&, const std::vector<value>& v) {
    return law_outcome{v[0].residue() < 3, v[0], i4(0), "too big"};
  };
  auto r = run_law("below_three", "test", {{}}, dom, small, harness_config{});
  CHECK(r.result == verdict::fail);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->inputs[0].residue() == 3);
  CHECK(r.replay());
}

TEST_CASE("reader laws") { require_all_pass(check_indexed_monad_laws(make_reader_instance(harness_signature()))); }

TEST_CASE("memory laws on one region are exhaustive except associativity") {
  auto sig = one_region();
  for (auto mode : {memory_monad::write_mode::partial, memory_monad::write_mode::exact}) {
    auto m = make_memory_instance(sig, mode);
    auto reports = check_indexed_monad_laws(m);
    require_all_pass(reports);
    for (const auto& r : reports) {
      // T F (T G (T H 1)) over one boolean region still has ~10^9 elements
      if (!r.informational && r.law != "associativity") CHECK(r.result == verdict::pass);
    }
    require_all_pass(check_state_laws(m, sig));
  }
}

TEST_CASE("state laws are reported only for memory") {
  CHECK(check_state_laws(make_reader_instance(harness_signature()), harness_signature()).empty());
  auto names = std::set<std::string>{};
  for (const auto& r : check_state_laws(make_memory_instance(one_region()), one_region())) names.insert(r.law);
  CHECK(names == std::set<std::string>{"put_put", "put_get", "get_put"});
}

TEST_CASE("trace and identity laws") {
  require_all_pass(check_indexed_monad_laws(make_trace_instance(harness_signature(), harness_trace_bound)));
  require_all_pass(check_indexed_monad_laws(identity_collapse_instance()));
}

TEST_CASE("partiality comonad laws") {
  auto reports = check_indexed_comonad_laws(make_partiality_instance());
  require_all_pass(reports);
  std::set<std::string> names;
  for (const auto& r : reports) names.insert(r.law);
  for (const char* law : {"counit_left", "counit_right", "coassociativity", "mzip_associativity", "share_naturality"}) {
    CHECK(names.contains(law));
  }
}

TEST_CASE("exact write fibers have no unit") {
  auto m = make_memory_instance(harness_signature(), memory_monad::write_mode::exact);
  auto f = check_fiber_not_monad(m, grade(token_set{effect_token::wr("r")}));
  CHECK(f.applicable);
  CHECK(f.exhaustive);
  CHECK(f.candidates == 64);  // (bool x int4)^bool
  CHECK(f.natural == 4);      // one per constant written value
  CHECK(f.right_unit == 0);
  CHECK_FALSE(f.monad_found());
}

TEST_CASE("fibers that are monads are found to be so") {
  auto partial = make_memory_instance(harness_signature());
  CHECK(check_fiber_not_monad(partial, grade(token_set{effect_token::wr("r")})).monad_found());
  CHECK(check_fiber_not_monad(make_reader_instance(harness_signature()), grade(token_set{})).monad_found());
  auto id = identity_collapse_instance();
  CHECK(check_fiber_not_monad(id, id->algebra().unit()).monad_found());
}

TEST_CASE("non-idempotent trace fibers are out of scope") {
  auto m = make_trace_instance(harness_signature(), harness_trace_bound);
  CHECK_FALSE(check_fiber_not_monad(m, grade(tag_trace{"a"})).applicable);
}

TEST_CASE("the unindexed partiality functor has no counit beyond one point") {
  auto rows = search_unindexed_counit(4);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].candidates == 0);
  CHECK(rows[1].lawful == 1);
  for (std::size_t n = 2; n < rows.size(); ++n) {
    CAPTURE(n);
    // n^(n+1) candidate maps, none natural
    std::uint64_t expect = 1;
    for (std::size_t i = 0; i <= n; ++i) expect *= n;
    CHECK(rows[n].candidates == expect);
    CHECK(rows[n].natural == 0);
    CHECK(rows[n].lawful == 0);
  }
}

TEST_CASE("every shipped mutant is caught with a replayable witness") {
  auto mutants = shipped_mutants();
  CHECK(mutants.size() >= 5);
  for (const auto& m : mutants) {
    CAPTURE(m.name);
    auto r = check_mutant(m);
    CHECK(r.caught);
    REQUIRE(r.failing.has_value());
    CHECK(r.failing->result == verdict::fail);
    CHECK(r.failing->replay());
  }
}

TEST_SUITE("reference interpreter") {
  TEST_CASE("write back what was read") {
    program p = parse("region r : int4; write r (read r)");
    auto o = global_state_oracle(p.sig, *p.body, {{"r", i4(2)}});
    REQUIRE(o.result.has_value());
    CHECK(o.result->is(value::kind::unit));
    CHECK(equal(o.store.at("r"), i4(2)));
    CHECK(o.trace.empty());
  }

  TEST_CASE("a later write overwrites") {
    program p = parse("region r : int4; let x = read r in write r 3");
    auto o = global_state_oracle(p.sig, *p.body, {{"r", i4(1)}});
    CHECK(equal(o.store.at("r"), i4(3)));
  }

  TEST_CASE("outputs are appended") {
    program p = parse("tag a : unit; out a unit");
    auto o = global_state_oracle(p.sig, *p.body, {});
    REQUIRE(o.trace.size() == 1);
    CHECK(o.trace[0].first == "a");
    CHECK(o.trace[0].second.is(value::kind::unit));
  }

  TEST_CASE("reads see earlier writes inside function bodies") {
    program p = parse("region r : int4; let f = \\x:int4. write r x; read r in (f 1, f 2)");
    auto o = global_state_oracle(p.sig, *p.body, {{"r", i4(0)}});
    REQUIRE(o.result.has_value());
    CHECK(equal(*o.result, value::pair(i4(1), i4(2))));
    CHECK(equal(o.store.at("r"), i4(2)));
  }

  TEST_CASE("closures have no first-order result") {
    program p = parse("\\x:int4. x");
    CHECK_FALSE(global_state_oracle(p.sig, *p.body, {}).result.has_value());
  }
}
