#pragma once

// JSON forms of values, indices, judgments, derivations and reports. Output
// uses insertion-ordered objects so the byte layout is fixed by the code.
//
// Indices: token sets as sorted arrays of "rd r" strings, traces as ordered
// arrays of "out a" strings, coeffect flags as "t" / "f", the trivial index
// as []. Values: "unit", booleans, integers, [a, b] for pairs, "<fun>" for
// functions, null for the one-point value.

#include <json.hpp>

#include "gradeff/coeffect_inference.hpp"
#include "gradeff/effect_inference.hpp"
#include "gradeff/law_harness.hpp"
#include "gradeff/semantics.hpp"

namespace gradeff {

using json = nlohmann::ordered_json;

json to_json(const value& v);
json to_json(const grade& g);
json to_json(const source_pos& p);
json to_json(const error& e);

// Parses a first-order value of type `t`; input_mismatch otherwise.
value value_from_json(const nlohmann::json& j, const sem_type& t, const std::string& where);
grade grade_from_json(const nlohmann::json& j, const effect_algebra& alg);

// {"env": {param: value}, "store": {region: value}}; names must be declared.
run_inputs inputs_from_json(const nlohmann::json& j, const signature& sig);

json to_json(const derivation& d);
json to_json(const coeffect_derivation& d);

// The annotate document: program text, index algebra, conclusion, and the
// derivation tree with its coercion sites.
json annotation_json(const program& p, const effect_algebra& alg, const effect_judgment& j);

// Rebuilds the derivation of an annotate document against its own program
// text and replays it. Returns the replayed conclusion; throws type error on
// any node the rules do not reproduce.
std::pair<obj_type, grade> validate_annotation(const nlohmann::json& doc, const effect_algebra& alg);
derivation_ptr derivation_from_json(const nlohmann::json& node, const term_ptr& subject, const signature& sig,
                                    const effect_algebra& alg);

json to_json(const execution_report& r);
json to_json(const law_report& r);
json to_json(const fiber_report& r);

}  // namespace gradeff
