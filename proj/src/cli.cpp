#include "gradeff/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gradeff/semantics.hpp"
#include "gradeff/serialize.hpp"

namespace gradeff {

namespace {

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string load_source(const cli_config& cfg, std::istream& in) {
  if (cfg.source) return *cfg.source;
  if (cfg.input == "-") return read_all(in);
  std::ifstream f(cfg.input);
  if (!f) throw error(error_kind::usage, "cannot open program file '" + cfg.input + "'");
  return read_all(f);
}

std::string show_context(const type_context& ctx) {
  std::string s;
  for (const auto& [x, t] : ctx) s += (s.empty() ? "" : ", ") + x + " : " + t.show();
  return s.empty() ? "" : s + " ";
}

token_set all_tokens(const signature& sig) {
  token_set ts = sig.effect_tokens();
  for (const auto& tag : sig.tag_names()) ts.insert(effect_token::out(tag));
  return ts;
}

// With no instance the index algebra is the powerset of every declared
// token, so any mix of primitives can be checked.
effect_algebra algebra_for(const program& p, const std::string& instance) {
  if (instance.empty()) return powerset_algebra(all_tokens(p.sig));
  return select_instance(p, instance)->algebra();
}

effect_judgment infer_for_instance(const program& p, const effect_algebra& alg, const std::string& instance) {
  try {
    return infer_effect(p.sig, alg, {}, p.body);
  } catch (const error& e) {
    if (e.kind() != error_kind::unsupported_primitive || instance.empty()) throw;
    throw error(e.kind(), "primitive not supported by instance " + instance + ": " + e.what(), e.pos());
  }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_check(const cli_config& cfg, const program& p, std::ostream& out) {
  effect_algebra alg = algebra_for(p, cfg.instance);
  effect_judgment j = infer_for_instance(p, alg, cfg.instance);
  if (cfg.format == "json") {
    json o;
    o["algebra"] = alg.name();
    o["term"] = pretty(*p.body);
    o["type"] = j.type().show();
    o["effect"] = to_json(j.effect());
    emit(out, o);
  } else {
    out << show_context(j.ctx) << "⊢ " << pretty(*p.body) << " : " << j.type().show() << ", " << j.effect().show()
        << "\n";
  }
  return exit_ok;
}

int cmd_coeffect(const cli_config& cfg, const program& p, std::ostream& out) {
  coeffect_judgment j = infer_coeffect(p.sig, {}, p.body, cfg.split);
  const char* policy = cfg.split == lam_split::duplicate ? "duplicate" : "latent-max";
  if (cfg.format == "json") {
    json o;
    o["split"] = policy;
    o["term"] = pretty(*p.body);
    o["type"] = j.type().show();
    o["coeffect"] = j.coeffect() ? "t" : "f";
    json live = json::array();
    for (const auto& l : j.liveness) {
      live.push_back(json{{"id", l.id}, {"binder", l.binder}, {"at", to_json(l.pos)}, {"live", l.live}});
    }
    o["liveness"] = std::move(live);
    o["derivation"] = to_json(*j.root);
    emit(out, o);
  } else {
    out << show_context(j.ctx) << "? " << (j.coeffect() ? "t" : "f") << " ⊢ " << pretty(*p.body) << " : "
        << j.type().show() << "\n";
    for (const auto& l : j.liveness) {
      out << "  let #" << l.id << " " << l.binder << " at " << l.pos.line << ":" << l.pos.col << "  "
          << (l.live ? "live" : "dead") << "\n";
    }
  }
  return exit_ok;
}

run_inputs load_inputs(const cli_config& cfg, const program& p) {
  if (cfg.inputs_path.empty()) return {};
  std::ifstream f(cfg.inputs_path);
  if (!f) throw error(error_kind::usage, "cannot open inputs file '" + cfg.inputs_path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw error(error_kind::input_mismatch, std::string("inputs file is not JSON: ") + e.what());
  }
  return inputs_from_json(j, p.sig);
}

int cmd_eval(const cli_config& cfg, const program& p, std::ostream& out) {
  run_inputs inputs = load_inputs(cfg, p);
  monad_ptr inst = select_instance(p, cfg.instance.empty() ? "auto" : cfg.instance);
  execution_report r;
  try {
    r = eval_program(p, inputs, inst, cfg.split);
  } catch (const error& e) {
    if (e.kind() != error_kind::unsupported_primitive) throw;
    throw error(e.kind(), "primitive not supported by instance " + inst->name() + ": " + e.what(), e.pos());
  }
  if (cfg.format == "json") {
    emit(out, to_json(r));
    return exit_ok;
  }
  auto row = [&out](const char* k) -> std::ostream& { return out << std::left << std::setw(10) << k; };
  row("instance") << r.instance << "\n";
  row("value") << show(r.result) << "\n";
  row("type") << r.type.show() << "\n";
  row("effect") << r.effect.show() << "\n";
  std::string writes;
  for (const auto& [k, v] : r.writes) writes += (writes.empty() ? "" : ", ") + k + "=" + show(v);
  row("writes") << (writes.empty() ? "-" : writes) << "\n";
  std::string trace;
  for (const auto& [tag, v] : r.trace) trace += (trace.empty() ? "" : ", ") + tag + "=" + show(v);
  row("trace") << (trace.empty() ? "-" : trace) << "\n";
  row("coeffect") << (r.coeffect ? (*r.coeffect ? "t" : "f") : "-") << "\n";
  for (const auto& l : r.lets) {
    out << "  let #" << l.id << " " << l.binder << " at " << l.pos.line << ":" << l.pos.col << "  live="
        << (l.live ? (*l.live ? "t" : "f") : "-") << " evaluations=" << l.evaluations
        << " strict=" << l.strict_evaluations << "\n";
  }
  return exit_ok;
}

int cmd_annotate(const cli_config& cfg, const program& p, std::ostream& out) {
  effect_algebra alg = algebra_for(p, cfg.instance);
  effect_judgment j = infer_for_instance(p, alg, cfg.instance);
  emit(out, annotation_json(p, alg, j));
  return exit_ok;
}

json algebra_report_json(const algebra_law_report& r) {
  json o;
  o["algebra"] = r.algebra;
  o["carrier_size"] = r.carrier_size;
  o["skipped"] = r.skipped;
  json laws = json::array();
  for (const auto& l : r.laws) {
    json e{{"law", l.name}, {"passed", l.passed}};
    if (!l.passed) {
      json w = json::array();
      for (const auto& g : l.witness) w.push_back(g.show());
      e["witness"] = std::move(w);
      e["detail"] = l.detail;
    }
    laws.push_back(std::move(e));
  }
  o["laws"] = std::move(laws);
  return o;
}

int cmd_laws(const cli_config& cfg, std::ostream& out) {
  static const std::vector<std::string> monads{"reader", "memory", "memory-exact", "trace", "identity"};
  std::vector<std::string> selected;
  if (cfg.instance.empty()) {
    selected = monads;
    selected.push_back("partiality");
  } else if (cfg.instance == "partiality" ||
             std::find(monads.begin(), monads.end(), cfg.instance) != monads.end()) {
    selected = {cfg.instance};
  } else {
    throw error(error_kind::usage, "unknown instance '" + cfg.instance + "'");
  }

  harness_config hc;
  hc.budget = cfg.budget;
  hc.seed = cfg.seed;
  const signature sig = harness_signature();
  program shell{sig, term::constant(value::unit())};

  bool ok = true;
  json doc = json::array();
  for (const auto& name : selected) {
    std::vector<law_report> reports;
    std::optional<effect_algebra> alg;
    if (name == "partiality") {
      auto c = make_partiality_instance();
      alg = c->algebra();
      reports = check_indexed_comonad_laws(c, hc);
    } else {
      monad_ptr m = select_instance(shell, name, harness_trace_bound);
      alg = m->algebra();
      reports = check_indexed_monad_laws(m, hc);
      auto state = check_state_laws(m, sig, hc);
      reports.insert(reports.end(), state.begin(), state.end());
    }
    algebra_law_report ar = check_algebra_laws(*alg, hc.budget);
    ok = ok && ar.all_passed();
    for (const auto& r : reports) ok = ok && (r.informational || passed(r.result));

    if (cfg.format == "json") {
      json e;
      e["instance"] = name;
      e["algebra"] = algebra_report_json(ar);
      json laws = json::array();
      for (const auto& r : reports) laws.push_back(to_json(r));
      e["laws"] = std::move(laws);
      doc.push_back(std::move(e));
      continue;
    }
    out << name << " (index algebra " << ar.algebra << ", " << ar.carrier_size << " elements)\n";
    for (const auto& l : ar.laws) {
      out << "  " << std::left << std::setw(22) << ("algebra." + l.name) << (l.passed ? "pass" : "fail") << "\n";
    }
    for (const auto& r : reports) {
      out << "  " << std::left << std::setw(22) << r.law << std::setw(16) << to_string(r.result) << r.cases
          << " cases" << (r.informational ? "  (informational)" : "") << "\n";
      if (r.witness) {
        out << "    counterexample at";
        for (const auto& g : r.witness->indices) out << " " << g.show();
        for (const auto& v : r.witness->inputs) out << " | " << show(v);
        out << "\n";
        if (r.witness->outcome.lhs) out << "    lhs " << show(*r.witness->outcome.lhs) << "\n";
        if (r.witness->outcome.rhs) out << "    rhs " << show(*r.witness->outcome.rhs) << "\n";
        if (!r.witness->outcome.note.empty()) out << "    " << r.witness->outcome.note << "\n";
      }
    }
  }
  if (cfg.format == "json") emit(out, doc);
  return ok ? exit_ok : exit_analysis;
}

}  // namespace

int run(const cli_config& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  const bool as_json = cfg.format == "json";
  try {
    if (cfg.format != "human" && cfg.format != "json") {
      throw error(error_kind::usage, "unknown format '" + cfg.format + "'");
    }
    if (cfg.command == "laws") return cmd_laws(cfg, out);
    if (cfg.command != "check" && cfg.command != "coeffect" && cfg.command != "eval" && cfg.command != "annotate") {
      throw error(error_kind::usage, "unknown command '" + cfg.command + "'");
    }
    program p = parse(load_source(cfg, in));
    if (cfg.command == "check") return cmd_check(cfg, p, out);
    if (cfg.command == "coeffect") return cmd_coeffect(cfg, p, out);
    if (cfg.command == "eval") return cmd_eval(cfg, p, out);
    return cmd_annotate(cfg, p, out);
  } catch (const error& e) {
    if (as_json) emit(out, json{{"error", to_json(e)}});
    err << "error: " << e.describe() << "\n";
    return e.kind() == error_kind::usage ? exit_usage : exit_analysis;
  }
}

int main_entry(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graded effect and coeffect analysis for a small call-by-value calculus", "gradeff"};
  cli_config cfg;
  std::string split = "duplicate";
  app.add_option("command", cfg.command, "check | coeffect | eval | laws | annotate")
      ->required()
      ->check(CLI::IsMember({"check", "coeffect", "eval", "laws", "annotate"}));
  app.add_option("file", cfg.input, "program file (default: stdin)");
  app.add_option("--instance", cfg.instance, "reader | memory | memory-exact | trace | identity | partiality | auto");
  app.add_option("--inputs", cfg.inputs_path, "JSON file with \"env\" and \"store\" objects");
  app.add_option("--format", cfg.format, "human | json")->check(CLI::IsMember({"human", "json"}));
  app.add_option("--budget", cfg.budget, "law cases checked exhaustively per law");
  app.add_option("--seed", cfg.seed, "seed for sampled law cases");
  app.add_option("--split", split, "lambda demand split: duplicate | latent-max")
      ->check(CLI::IsMember({"duplicate", "latent-max"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }
  cfg.split = split == "duplicate" ? lam_split::duplicate : lam_split::latent_max;
  return run(cfg, in, out, err);
}

}  // namespace gradeff
