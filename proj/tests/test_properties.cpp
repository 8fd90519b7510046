#include <doctest.h>

#include "properties.hpp"

using namespace gradeff::testing;

namespace {

void require_ok(const property_result& r, int minimum) {
  CAPTURE(r.name);
  CAPTURE(r.first_failure);
  CHECK(r.failed == 0);
  CHECK(r.checked >= minimum);
}

}  // namespace

TEST_CASE("denotation indices are the inferred effects") {
  for (const char* inst : {"reader", "memory", "trace", "identity", "partiality"}) require_ok(coherence(inst, 200, 1), 200);
}

TEST_CASE("beta-value holds in every instance") {
  for (const char* inst : {"reader", "memory", "trace", "identity"}) require_ok(beta_value(inst, 60, 2), 60);
}

TEST_CASE("agreement with the direct-style interpreter") {
  require_ok(oracle_agreement("memory", 300, 3), 300);
  require_ok(oracle_agreement("trace", 250, 5), 250);
}

TEST_CASE("dead bindings are never evaluated") {
  require_ok(dead_code(true, 120, 6), 120);
  require_ok(dead_code(false, 200, 7), 200);
}
