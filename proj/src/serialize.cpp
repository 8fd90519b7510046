#include "gradeff/serialize.hpp"


namespace gradeff {

json to_json(const value& v) {
  switch (v.tag()) {
    case value::kind::unit: return "unit";
    case value::kind::boolean: return v.as_bool();
    case value::kind::int_mod: return v.residue();
    case value::kind::pair: return json::array({to_json(v.first()), to_json(v.second())});
    case value::kind::fun: return "<fun>";
    case value::kind::absent: return nullptr;
    case value::kind::record: {
      json o = json::object();
      for (const auto& [k, x] : v.fields()) o[k] = to_json(x);
      return o;
    }
    case value::kind::tuple: {
      json a = json::array();
      for (const auto& x : v.elements()) a.push_back(to_json(x));
      return a;
    }
  }
  return nullptr;
}

json to_json(const grade& g) {
  if (g.is_bool()) return g.flag() ? "t" : "f";
  json a = json::array();
  for (const auto& item : latent_items(g)) a.push_back(item);
  return a;
}

json to_json(const source_pos& p) {
  if (!p.known()) return nullptr;
  return std::to_string(p.line) + ":" + std::to_string(p.col);
}

json to_json(const error& e) {
  json o;
  o["kind"] = std::string(to_string(e.kind()));
  o["at"] = to_json(e.pos());
  o["message"] = e.what();
  return o;
}

value value_from_json(const nlohmann::json& j, const sem_type& t, const std::string& where) {
  auto bad = [&] { return error(error_kind::input_mismatch, where + ": expected a value of type " + t.show() + ", got " + j.dump()); };
  switch (t.tag()) {
    case sem_type::kind::unit:
      if (j != "unit") throw bad();
      return value::unit();
    case sem_type::kind::boolean:
      if (!j.is_boolean()) throw bad();
      return value::boolean(j.get<bool>());
    case sem_type::kind::int_mod: {
      if (!j.is_number_integer()) throw bad();
      long k = j.get<long>();
      if (k < 0 || k >= t.modulus()) throw bad();
      return value::int_mod(k, t.modulus());
    }
    case sem_type::kind::product:
      if (!j.is_array() || j.size() != 2) throw bad();
      return value::pair(value_from_json(j[0], t.first(), where), value_from_json(j[1], t.second(), where));
    default: throw bad();
  }
}

grade grade_from_json(const nlohmann::json& j, const effect_algebra& alg) {
  auto bad = [&] { return error(error_kind::type, "not an index of " + alg.name() + ": " + j.dump()); };
  if (j.is_string()) {
    if (!alg.unit().is_bool() || (j != "t" && j != "f")) throw bad();
    return grade(j == "t");
  }
  if (!j.is_array()) throw bad();
  std::vector<effect_token> toks;
  for (const auto& item : j) {
    if (!item.is_string()) throw bad();
    auto tok = effect_token::parse(item.get<std::string>());
    if (!tok) throw bad();
    toks.push_back(*tok);
  }
  auto g = alg.from_tokens(toks);
  if (!g || !alg.contains(*g)) throw bad();
  return *g;
}

run_inputs inputs_from_json(const nlohmann::json& j, const signature& sig) {
  if (!j.is_object()) throw error(error_kind::input_mismatch, "inputs must be an object with \"env\" and \"store\"");
  run_inputs in;
  for (const auto& [key, section] : j.items()) {
    if (key != "env" && key != "store") throw error(error_kind::input_mismatch, "unknown inputs section '" + key + "'");
    if (!section.is_object()) throw error(error_kind::input_mismatch, "inputs section '" + key + "' must be an object");
    const bool env = key == "env";
    const auto& declared = env ? sig.params : sig.regions;
    auto& into = env ? in.env : in.store;
    for (const auto& [name, v] : section.items()) {
      auto it = declared.find(name);
      if (it == declared.end()) {
        throw error(error_kind::input_mismatch,
                    std::string(env ? "undeclared parameter '" : "undeclared region '") + name + "'");
      }
      into.emplace(name, value_from_json(v, sem_of(it->second), key + "." + name));
    }
  }
  return in;
}

namespace {

json coercions_json(const std::vector<coercion>& cs) {
  json a = json::array();
  for (const auto& c : cs) {
    json o;
    o["site"] = c.site;
    if (c.effect) o["iota"] = json{{"from", to_json(c.effect->first)}, {"to", to_json(c.effect->second)}};
    if (c.type) o["type"] = json{{"from", c.type->first.show()}, {"to", c.type->second.show()}};
    a.push_back(std::move(o));
  }
  return a;
}

}  // namespace

json to_json(const derivation& d) {
  json o;
  o["rule"] = d.rule;
  o["term"] = pretty(*d.subject);
  o["at"] = to_json(d.subject->pos);
  o["type"] = d.type.show();
  o["effect"] = to_json(d.effect);
  if (!d.coercions.empty()) o["coercions"] = coercions_json(d.coercions);
  json premises = json::array();
  for (const auto& c : d.children) premises.push_back(to_json(*c));
  o["premises"] = std::move(premises);
  return o;
}

json to_json(const coeffect_derivation& d) {
  json o;
  o["rule"] = d.rule;
  o["term"] = pretty(*d.subject);
  o["at"] = to_json(d.subject->pos);
  o["type"] = d.type.show();
  o["coeffect"] = d.demand ? "t" : "f";
  if (d.immediate) o["immediate"] = *d.immediate ? "t" : "f";
  if (d.latent) o["latent"] = *d.latent ? "t" : "f";
  if (!d.coercions.empty()) o["coercions"] = coercions_json(d.coercions);
  json premises = json::array();
  for (const auto& c : d.children) premises.push_back(to_json(*c));
  o["premises"] = std::move(premises);
  return o;
}

json annotation_json(const program& p, const effect_algebra& alg, const effect_judgment& j) {
  json o;
  o["program"] = pretty(p);
  o["algebra"] = alg.name();
  o["type"] = j.type().show();
  o["effect"] = to_json(j.effect());
  o["derivation"] = to_json(*j.root);
  return o;
}

namespace {

obj_type type_from_json(const nlohmann::json& j, const effect_algebra& alg, const signature& sig) {
  if (!j.is_string()) throw error(error_kind::type, "derivation type must be a string");
  return resolve(*parse_type(j.get<std::string>()), alg, sig);
}

std::vector<coercion> coercions_from_json(const nlohmann::json& node, const effect_algebra& alg, const signature& sig) {
  std::vector<coercion> out;
  if (!node.contains("coercions")) return out;
  for (const auto& c : node.at("coercions")) {
    coercion k;
    k.site = c.at("site").get<std::string>();
    if (c.contains("iota")) {
      k.effect = std::make_pair(grade_from_json(c["iota"].at("from"), alg), grade_from_json(c["iota"].at("to"), alg));
    }
    if (c.contains("type")) {
      k.type = std::make_pair(type_from_json(c["type"].at("from"), alg, sig), type_from_json(c["type"].at("to"), alg, sig));
    }
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace

derivation_ptr derivation_from_json(const nlohmann::json& node, const term_ptr& subject, const signature& sig,
                                    const effect_algebra& alg) {
  try {
    auto d = std::make_shared<derivation>();
    d->rule = node.at("rule").get<std::string>();
    d->subject = subject;
    if (node.at("term").get<std::string>() != pretty(*subject)) {
      throw error(error_kind::type, "derivation node names '" + node.at("term").get<std::string>() +
                                        "' where the program has '" + pretty(*subject) + "'");
    }
    d->type = type_from_json(node.at("type"), alg, sig);
    d->effect = grade_from_json(node.at("effect"), alg);
    d->coercions = coercions_from_json(node, alg, sig);
    const auto& premises = node.at("premises");
    // "sub" concludes about the same term as its premise; every other rule
    // has one premise per immediate subterm.
    if (d->rule == "sub") {
      if (premises.size() != 1) throw error(error_kind::type, "sub node must have exactly one premise");
      d->children.push_back(derivation_from_json(premises[0], subject, sig, alg));
    } else {
      if (premises.size() != subject->kids.size()) {
        throw error(error_kind::type, "rule " + d->rule + " at '" + pretty(*subject) + "' has " +
                                          std::to_string(premises.size()) + " premises, expected " +
                                          std::to_string(subject->kids.size()));
      }
      for (std::size_t i = 0; i < premises.size(); ++i) {
        d->children.push_back(derivation_from_json(premises[i], subject->kids[i], sig, alg));
      }
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw error(error_kind::type, std::string("malformed derivation: ") + e.what());
  }
}

std::pair<obj_type, grade> validate_annotation(const nlohmann::json& doc, const effect_algebra& alg) {
  try {
    if (doc.at("algebra").get<std::string>() != alg.name()) {
      throw error(error_kind::algebra_mismatch,
                  "document is over " + doc.at("algebra").get<std::string>() + ", not " + alg.name());
    }
    program p = parse(doc.at("program").get<std::string>());
    derivation_ptr d = derivation_from_json(doc.at("derivation"), p.body, p.sig, alg);
    auto concl = replay(p.sig, alg, {}, *d);
    if (!(concl.first == type_from_json(doc.at("type"), alg, p.sig)) ||
        concl.second != grade_from_json(doc.at("effect"), alg)) {
      throw error(error_kind::type, "document conclusion differs from its derivation");
    }
    return concl;
  } catch (const nlohmann::json::exception& e) {
    throw error(error_kind::type, std::string("malformed annotation document: ") + e.what());
  }
}

json to_json(const execution_report& r) {
  json o;
  o["instance"] = r.instance;
  o["value"] = to_json(r.result);
  o["type"] = r.type.show();
  json writes = json::object();
  for (const auto& [k, v] : r.writes) writes[k] = to_json(v);
  o["writes"] = std::move(writes);
  json trace = json::array();
  for (const auto& [tag, v] : r.trace) trace.push_back(json{{"tag", tag}, {"value", to_json(v)}});
  o["trace"] = std::move(trace);
  o["effect"] = to_json(r.effect);
  o["coeffect"] = r.coeffect ? json(*r.coeffect ? "t" : "f") : json(nullptr);
  json lets = json::array();
  for (const auto& l : r.lets) {
    json e;
    e["id"] = l.id;
    e["binder"] = l.binder;
    e["at"] = to_json(l.pos);
    e["live"] = l.live ? json(*l.live) : json(nullptr);
    e["evaluations"] = l.evaluations;
    e["strict_evaluations"] = l.strict_evaluations;
    lets.push_back(std::move(e));
  }
  o["lets"] = std::move(lets);
  return o;
}

json to_json(const law_report& r) {
  json o;
  o["law"] = r.law;
  o["instance"] = r.instance;
  o["verdict"] = std::string(to_string(r.result));
  o["cases"] = r.cases;
  o["space"] = r.space;
  o["index_tuples"] = r.index_tuples;
  if (r.informational) o["informational"] = true;
  if (!r.detail.empty()) o["detail"] = r.detail;
  if (r.witness) {
    json w;
    json idx = json::array();
    for (const auto& g : r.witness->indices) idx.push_back(g.show());
    w["indices"] = std::move(idx);
    json in = json::array();
    for (const auto& v : r.witness->inputs) in.push_back(show(v));
    w["inputs"] = std::move(in);
    w["lhs"] = r.witness->outcome.lhs ? json(show(*r.witness->outcome.lhs)) : json(nullptr);
    w["rhs"] = r.witness->outcome.rhs ? json(show(*r.witness->outcome.rhs)) : json(nullptr);
    if (!r.witness->outcome.note.empty()) w["note"] = r.witness->outcome.note;
    o["counterexample"] = std::move(w);
  }
  return o;
}

json to_json(const fiber_report& r) {
  json o;
  o["instance"] = r.instance;
  o["index"] = to_json(r.index);
  o["applicable"] = r.applicable;
  o["exhaustive"] = r.exhaustive;
  o["candidates"] = r.candidates;
  o["natural"] = r.natural;
  o["right_unit"] = r.right_unit;
  o["both_units"] = r.both_units;
  o["monad_found"] = r.monad_found();
  o["detail"] = r.detail;
  return o;
}

}  // namespace gradeff
