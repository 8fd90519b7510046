#pragma once

// Pointwise verification of the indexed monad/comonad laws over enumerated
// indices and values, the negative results (fibers that are not monads, the
// unindexed partiality functor without a counit), seeded law-breaking
// mutants, and a direct-style reference interpreter.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gradeff/calculus.hpp"
#include "gradeff/indexed_comonad.hpp"
#include "gradeff/indexed_monad.hpp"

namespace gradeff {

enum class verdict { pass, sampled_pass, fail, budget_exceeded, not_applicable };

std::string_view to_string(verdict v);
bool passed(verdict v);  // pass, sampled_pass or not_applicable

struct law_outcome {
  bool ok = true;
  std::optional<value> lhs;
  std::optional<value> rhs;
  std::string note;  // raised error, or which component differs
};

using law_check = std::function<law_outcome(const std::vector<grade>&, const std::vector<value>&)>;

struct counterexample {
  std::vector<grade> indices;
  std::vector<value> inputs;
  law_outcome outcome;
};

struct law_report {
  std::string law;
  std::string instance;
  verdict result = verdict::not_applicable;
  std::uint64_t cases = 0;       // law instances evaluated
  std::uint64_t space = 0;       // size of the full case space (saturating)
  std::uint64_t index_tuples = 0;
  bool informational = false;    // reported, not required
  std::string detail;
  std::optional<counterexample> witness;
  law_check check;               // for replay

  // Re-evaluates the law at the witness; true when it still fails.
  bool replay() const;
};

inline constexpr std::uint64_t default_law_budget = 1'000'000;
inline constexpr std::uint64_t default_sample_cases = 20'000;

struct harness_config {
  std::uint64_t budget = default_law_budget;        // exhaustive up to this many cases per law
  std::uint64_t sample_cases = default_sample_cases;  // cases drawn per law beyond the budget
  std::uint64_t seed = 0x5eed;
};

// One law over a space of index tuples and per-tuple value domains.
law_report run_law(const std::string& law, const std::string& instance, const std::vector<std::vector<grade>>& tuples,
                   const std::function<std::vector<sem_type>(const std::vector<grade>&)>& domains,
                   const law_check& check, const harness_config& cfg);

// Signatures the harness instantiates instances over: parameters p, q,
// regions r, s (int4) and tags a : bool, b : int4.
signature harness_signature();
inline constexpr std::size_t harness_trace_bound = 3;

std::vector<law_report> check_indexed_monad_laws(const monad_ptr& inst, const harness_config& cfg = {});
// put-put, put-get and get-put for memory instances (empty otherwise).
std::vector<law_report> check_state_laws(const monad_ptr& inst, const signature& sig,
                                         const harness_config& cfg = {});
std::vector<law_report> check_indexed_comonad_laws(const comonad_ptr& inst, const harness_config& cfg = {});

struct fiber_report {
  std::string instance;
  grade index;
  bool applicable = true;
  bool exhaustive = true;             // false: only natural candidates searched
  std::uint64_t candidates = 0;       // eta : bool -> T F bool
  std::uint64_t natural = 0;          // of which natural (extend along Yoneda)
  std::uint64_t right_unit = 0;       // of which satisfy the right unit law
  std::uint64_t both_units = 0;       // of which satisfy both unit laws
  std::optional<value> unit_found;    // a surviving eta at bool
  std::string detail;

  bool monad_found() const { return unit_found.has_value(); }
};

// Searches every eta : bool -> T F bool for a unit of the fiber T F with
// multiplication mu_{F,F} (followed by iota when F.F <= F). Beyond `budget`
// candidates only the natural ones are searched.
fiber_report check_fiber_not_monad(const monad_ptr& inst, const grade& f, std::uint64_t max_domain = 4,
                                   std::uint64_t budget = default_law_budget);

struct counit_search {
  std::size_t size = 0;          // |A|
  std::uint64_t candidates = 0;  // functions 1 + A -> A
  std::uint64_t natural = 0;     // natural against every endomap of A
  std::uint64_t lawful = 0;      // natural and satisfying both counit laws
};

// Candidate counits of the unindexed D A = 1 + A for |A| = 0..max_size.
std::vector<counit_search> search_unindexed_counit(std::size_t max_size = 4);

struct zip_candidate {
  std::string table;  // "ff ft tf tt" outputs, e.g. "ffft" for and
  bool associative = false;
  bool total = false;          // D F A x D G B -> D (F v G)(A x B) exists for all A, B
  bool preserves_unit = false; // t v t = t
};

// All 16 binary operations on {f, t} as candidates for the zip index.
std::vector<zip_candidate> search_zip_operations();

struct mutant {
  std::string name;
  std::string description;
  std::function<std::vector<law_report>(const harness_config&)> run;
};

std::vector<mutant> shipped_mutants();

struct mutant_report {
  std::string name;
  bool caught = false;
  std::optional<law_report> failing;  // first failing law
};

mutant_report check_mutant(const mutant& m, const harness_config& cfg = {});

struct oracle_result {
  std::optional<value> result;  // nullopt when the result is a closure
  std::map<std::string, value> store;
  std::vector<std::pair<std::string, value>> trace;
};

// Direct-style call-by-value interpreter threading one global store and an
// append-only trace. `store` must cover every declared region.
oracle_result global_state_oracle(const signature& sig, const term& e, std::map<std::string, value> store,
                                  const std::map<std::string, value>& env = {});

}  // namespace gradeff
