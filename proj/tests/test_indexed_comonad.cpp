#include <doctest.h>

#include "gradeff/indexed_comonad.hpp"
#include "gradeff/law_harness.hpp"

using namespace gradeff;

namespace {

const grade T{true};
const grade F{false};
value i4(int k) { return value::int_mod(k); }
value succ(const value& v) { return value::int_mod(v.residue() + 1); }

}  // namespace

TEST_CASE("counit is the identity at t") {
  auto c = make_partiality_instance();
  CHECK(equal(c->epsilon(i4(2)), i4(2)));
}

TEST_CASE("delta is absent whenever an index is f") {
  auto c = make_partiality_instance();
  CHECK(c->delta(F, T, value::absent()).is(value::kind::absent));
  CHECK(c->delta(F, F, value::absent()).is(value::kind::absent));
  CHECK(c->delta(T, F, value::absent()).is(value::kind::absent));
  CHECK(equal(c->delta(T, T, i4(1)), i4(1)));
}

TEST_CASE("a present value at index f is a shape error") {
  auto c = make_partiality_instance();
  try {
    c->delta(T, F, i4(3));
    FAIL("expected an index mismatch");
  } catch (const error& e) {
    CHECK(e.kind() == error_kind::index_mismatch);
  }
}

TEST_CASE("mzip pairs only when both sides are live") {
  auto c = make_partiality_instance();
  CHECK(c->zip_index(T, F) == F);
  CHECK(c->mzip(T, F, i4(1), value::absent()).is(value::kind::absent));
  CHECK(equal(c->mzip(T, T, i4(1), value::boolean(true)), value::pair(i4(1), value::boolean(true))));
}

TEST_CASE("fmap on the one-point object is constant") {
  auto c = make_partiality_instance();
  CHECK(c->fmap(F, succ, value::absent()).is(value::kind::absent));
  CHECK(equal(c->fmap(T, succ, i4(1)), i4(2)));
}

TEST_CASE("indexing relaxes shape preservation") {
  auto c = make_partiality_instance();
  auto A = sem_type::int_mod(4);
  CHECK(cardinality(c->carrier_of(F, A)) == 1u);
  CHECK(cardinality(c->carrier_of(T, A)) == 4u);
}

TEST_CASE("share hands the context to each live side") {
  auto c = make_partiality_instance();
  CHECK(c->share_index(T, F) == T);
  CHECK(c->share_index(F, F) == F);
  value s = c->share(T, F, i4(2));
  CHECK(equal(s.first(), i4(2)));
  CHECK(s.second().is(value::kind::absent));
  value none = c->share(F, F, value::absent());
  CHECK(none.first().is(value::kind::absent));
  CHECK(none.second().is(value::kind::absent));
}

TEST_CASE("weakening forgets context but cannot invent it") {
  auto c = make_partiality_instance();
  CHECK(c->weaken_defined(T, F));
  CHECK(c->weaken_defined(T, T));
  CHECK_FALSE(c->weaken_defined(F, T));
  CHECK(c->weaken(T, F, i4(1)).is(value::kind::absent));
}

TEST_CASE("conjunction is the only total associative zip preserving t") {
  // Independent truth-table check: for op to be total, op(a, b) = t needs a
  // and b both t; with op(t, t) = t that forces op = and.
  int survivors = 0;
  for (const auto& z : search_zip_operations()) {
    bool total_assoc = z.total && z.associative;
    if (total_assoc && z.preserves_unit) {
      ++survivors;
      CHECK(z.table == "ffft");
    }
    if (z.table == "fttt") {
      CHECK(z.associative);
      CHECK_FALSE(z.total);
    }
  }
  CHECK(survivors == 1);
}
