#pragma once

// Randomized whole-pipeline properties shared by the unit tests and the
// acceptance run. Each returns how many generated programs were checked and
// the first failure, if any; generated programs the rules reject are skipped
// and do not count.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "term_gen.hpp"

namespace gradeff::testing {

struct property_result {
  std::string name;
  int checked = 0;
  int skipped = 0;
  int failed = 0;
  std::string first_failure;

  bool ok(int minimum) const { return failed == 0 && checked >= minimum; }
  void fail(const std::string& what);
};

// "reader", "memory", "trace", "identity" or "partiality" (coeffect side).
// The denotation's computed index equals the inferred effect (or
// coeffect), and running it on every input gives a value of its carrier.
property_result coherence(const std::string& instance, int count, std::uint64_t seed);

// (\x:s. e) v and e[x := v] denote equal computations in every context of
// {y : int4, z : bool}.
property_result beta_value(const std::string& instance, int count, std::uint64_t seed);

// Memory and trace programs agree with the direct-style interpreter on
// result, final store and trace, for sampled stores.
property_result oracle_agreement(const std::string& instance, int count, std::uint64_t seed);

// Bindings marked dead are never evaluated by the eliminating evaluator, and
// its result equals the strict one. `var_free` programs bind at least one
// let and mention no variables, so every binding is dead.
property_result dead_code(bool var_free, int count, std::uint64_t seed);

struct golden_result {
  int programs = 0;
  int compared = 0;  // (program, command) pairs
  std::vector<std::string> mismatches;
};

// Runs check, annotate and eval (JSON) over corpus/*.gf, with inputs from a
// sibling .json file, and compares with golden/<name>.<command>.json.
golden_result compare_goldens(const std::filesystem::path& test_dir);

}  // namespace gradeff::testing
