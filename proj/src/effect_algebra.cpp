#include "gradeff/effect_algebra.hpp"

#include <algorithm>
#include <sstream>

#include "gradeff/error.hpp"

namespace gradeff {

std::string effect_token::show() const {
  switch (k) {
    case kind::implicit_param: return "ip " + name;
    case kind::read: return "rd " + name;
    case kind::write: return "wr " + name;
    case kind::out: return "out " + name;
  }
  return name;
}

std::optional<effect_token> effect_token::parse(const std::string& text) {
  auto space = text.find(' ');
  if (space == std::string::npos || space + 1 >= text.size()) return std::nullopt;
  std::string head = text.substr(0, space);
  std::string name = text.substr(space + 1);
  if (name.find(' ') != std::string::npos) return std::nullopt;
  if (head == "ip") return ip(name);
  if (head == "rd") return rd(name);
  if (head == "wr") return wr(name);
  if (head == "out") return out(name);
  return std::nullopt;
}

std::string grade::show() const {
  std::ostringstream os;
  if (is_trivial()) return "1";
  if (is_bool()) return flag() ? "t" : "f";
  if (is_set()) {
    os << "{";
    bool first = true;
    for (const auto& t : tokens()) {
      os << (first ? "" : ", ") << t.show();
      first = false;
    }
    os << "}";
  } else {
    os << "[";
    for (std::size_t i = 0; i < trace().size(); ++i) os << (i ? ", " : "") << trace()[i];
    os << "]";
  }
  return os.str();
}

////////////////////////////////////////////////////////////////////////////////

effect_algebra::effect_algebra(definition def) : def_(std::make_shared<const definition>(std::move(def))) {}

grade effect_algebra::combine(const grade& a, const grade& b) const { return def_->combine(a, b); }

grade effect_algebra::combine(const std::vector<grade>& gs) const {
  grade acc = unit();
  for (const auto& g : gs) acc = combine(acc, g);
  return acc;
}

bool effect_algebra::leq(const grade& a, const grade& b) const {
  if (!def_->leq) throw error(error_kind::no_lattice, "algebra " + name() + " has no sub-effecting order");
  return def_->leq(a, b);
}

grade effect_algebra::join(const grade& a, const grade& b) const {
  if (!def_->leq) throw error(error_kind::no_lattice, "algebra " + name() + " has no joins");
  return combine(a, b);
}

std::vector<grade> effect_algebra::carrier(std::uint64_t budget) const {
  if (def_->carrier_size > budget) {
    throw error(error_kind::enumeration_budget_exceeded,
                "carrier of " + name() + " has " + std::to_string(def_->carrier_size) + " elements");
  }
  return def_->carrier();
}

////////////////////////////////////////////////////////////////////////////////
// shipped algebras
////////////////////////////////////////////////////////////////////////////////

effect_algebra powerset_algebra(const token_set& tokens) {
  std::vector<effect_token> universe(tokens.begin(), tokens.end());
  effect_algebra::definition d;
  {
    std::ostringstream os;
    os << "powerset" << grade(tokens).show();
    d.name = os.str();
  }
  d.unit = grade(token_set{});
  d.combine = [](const grade& a, const grade& b) {
    token_set out = a.tokens();
    out.insert(b.tokens().begin(), b.tokens().end());
    return grade(std::move(out));
  };
  d.leq = [](const grade& a, const grade& b) {
    return std::includes(b.tokens().begin(), b.tokens().end(), a.tokens().begin(), a.tokens().end());
  };
  d.carrier_size = universe.size() >= 62 ? ~std::uint64_t{0} : (std::uint64_t{1} << universe.size());
  d.carrier = [universe] {
    std::vector<grade> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe.size()); ++mask) {
      token_set s;
      for (std::size_t i = 0; i < universe.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) s.insert(universe[i]);
      }
      out.emplace_back(std::move(s));
    }
    return out;
  };
  d.contains = [tokens](const grade& g) {
    return g.is_set() && std::includes(tokens.begin(), tokens.end(), g.tokens().begin(), g.tokens().end());
  };
  d.primitive = [tokens](const effect_token& t) -> std::optional<grade> {
    if (!tokens.contains(t)) return std::nullopt;
    return grade(token_set{t});
  };
  d.to_tokens = [](const grade& g) { return std::vector<effect_token>(g.tokens().begin(), g.tokens().end()); };
  d.from_tokens = [tokens](const std::vector<effect_token>& ts) -> std::optional<grade> {
    token_set s;
    for (const auto& t : ts) {
      if (!tokens.contains(t)) return std::nullopt;
      s.insert(t);
    }
    return grade(std::move(s));
  };
  return effect_algebra(std::move(d));
}

effect_algebra bool_conj_algebra() {
  effect_algebra::definition d;
  d.name = "bool_conj";
  d.unit = grade(true);
  d.combine = [](const grade& a, const grade& b) { return grade(a.flag() && b.flag()); };
  d.carrier_size = 2;
  d.carrier = [] { return std::vector<grade>{grade(false), grade(true)}; };
  d.contains = [](const grade& g) { return g.is_bool(); };
  d.primitive = [](const effect_token&) -> std::optional<grade> { return std::nullopt; };
  // Only the unit is expressible as an (empty) annotation.
  d.to_tokens = [](const grade&) { return std::vector<effect_token>{}; };
  d.from_tokens = [](const std::vector<effect_token>& ts) -> std::optional<grade> {
    if (!ts.empty()) return std::nullopt;
    return grade(true);
  };
  return effect_algebra(std::move(d));
}

effect_algebra trace_algebra(const std::set<std::string>& tags, std::size_t max_len) {
  if (max_len < 1) throw error(error_kind::usage, "trace algebra needs max_len >= 1");
  std::vector<std::string> alphabet(tags.begin(), tags.end());
  effect_algebra::definition d;
  {
    std::ostringstream os;
    os << "trace{";
    for (std::size_t i = 0; i < alphabet.size(); ++i) os << (i ? ", " : "") << alphabet[i];
    os << "}/" << max_len;
    d.name = os.str();
  }
  d.unit = grade(tag_trace{});
  d.combine = [max_len](const grade& a, const grade& b) {
    if (a.trace().size() + b.trace().size() > max_len) {
      throw error(error_kind::index_overflow, "trace " + a.show() + " ++ " + b.show() + " exceeds length " +
                                                  std::to_string(max_len));
    }
    tag_trace out = a.trace();
    out.insert(out.end(), b.trace().begin(), b.trace().end());
    return grade(std::move(out));
  };
  std::uint64_t size = 0, layer = 1;
  for (std::size_t len = 0; len <= max_len; ++len) {
    size += layer;
    layer *= alphabet.size();
  }
  d.carrier_size = size;
  d.carrier = [alphabet, max_len] {
    std::vector<grade> out{grade(tag_trace{})};
    std::vector<tag_trace> frontier{tag_trace{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::vector<tag_trace> next;
      for (const auto& prefix : frontier) {
        for (const auto& tag : alphabet) {
          auto t = prefix;
          t.push_back(tag);
          out.emplace_back(t);
          next.push_back(std::move(t));
        }
      }
      frontier = std::move(next);
    }
    return out;
  };
  d.contains = [tags, max_len](const grade& g) {
    if (!g.is_trace() || g.trace().size() > max_len) return false;
    return std::all_of(g.trace().begin(), g.trace().end(), [&](const auto& t) { return tags.contains(t); });
  };
  d.primitive = [tags](const effect_token& t) -> std::optional<grade> {
    if (t.k != effect_token::kind::out || !tags.contains(t.name)) return std::nullopt;
    return grade(tag_trace{t.name});
  };
  d.to_tokens = [](const grade& g) {
    std::vector<effect_token> out;
    for (const auto& tag : g.trace()) out.push_back(effect_token::out(tag));
    return out;
  };
  d.from_tokens = [tags, max_len](const std::vector<effect_token>& ts) -> std::optional<grade> {
    tag_trace out;
    for (const auto& t : ts) {
      if (t.k != effect_token::kind::out || !tags.contains(t.name)) return std::nullopt;
      out.push_back(t.name);
    }
    if (out.size() > max_len) {
      throw error(error_kind::index_overflow, "annotation " + grade(out).show() + " exceeds trace bound");
    }
    return grade(std::move(out));
  };
  return effect_algebra(std::move(d));
}

effect_algebra trivial_algebra() {
  effect_algebra::definition d;
  d.name = "trivial";
  d.unit = grade(trivial_grade{});
  d.combine = [](const grade&, const grade&) { return grade(trivial_grade{}); };
  d.leq = [](const grade&, const grade&) { return true; };
  d.carrier_size = 1;
  d.carrier = [] { return std::vector<grade>{grade(trivial_grade{})}; };
  d.contains = [](const grade& g) { return g.is_trivial(); };
  d.primitive = [](const effect_token&) -> std::optional<grade> { return std::nullopt; };
  d.to_tokens = [](const grade&) { return std::vector<effect_token>{}; };
  d.from_tokens = [](const std::vector<effect_token>& ts) -> std::optional<grade> {
    if (!ts.empty()) return std::nullopt;
    return grade(trivial_grade{});
  };
  return effect_algebra(std::move(d));
}

////////////////////////////////////////////////////////////////////////////////
// law checking
////////////////////////////////////////////////////////////////////////////////

bool algebra_law_report::all_passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const algebra_law& l) { return l.passed; });
}

const algebra_law* algebra_law_report::find(const std::string& law) const {
  for (const auto& l : laws) {
    if (l.name == law) return &l;
  }
  return nullptr;
}

namespace {

// combine that reports overflow as nullopt
std::optional<grade> try_combine(const effect_algebra& alg, const grade& a, const grade& b) {
  try {
    return alg.combine(a, b);
  } catch (const error& e) {
    if (e.kind() == error_kind::index_overflow) return std::nullopt;
    throw;
  }
}

struct law_tracker {
  algebra_law law;

  explicit law_tracker(std::string name) { law.name = std::move(name); }

  void check(bool ok, std::vector<grade> witness, const std::string& detail = {}) {
    if (ok || !law.passed) return;
    law.passed = false;
    law.witness = std::move(witness);
    law.detail = detail;
  }
};

}  // namespace

algebra_law_report check_algebra_laws(const effect_algebra& alg, std::uint64_t budget) {
  algebra_law_report report;
  report.algebra = alg.name();
  report.carrier_size = alg.carrier_size();
  std::uint64_t n = alg.carrier_size();
  if (n != 0 && (n > budget || n * n > budget / n)) {
    throw error(error_kind::enumeration_budget_exceeded,
                "law check over " + alg.name() + " needs " + std::to_string(n) + "^3 evaluations");
  }
  const auto carrier = alg.carrier(budget);

  law_tracker closure("closure"), assoc("associativity"), left_id("left_identity"), right_id("right_identity");
  for (const auto& a : carrier) {
    auto ua = try_combine(alg, alg.unit(), a);
    auto au = try_combine(alg, a, alg.unit());
    left_id.check(ua && *ua == a, {a}, "combine(unit, a) = " + (ua ? ua->show() : "overflow"));
    right_id.check(au && *au == a, {a}, "combine(a, unit) = " + (au ? au->show() : "overflow"));
    for (const auto& b : carrier) {
      auto ab = try_combine(alg, a, b);
      if (ab) closure.check(alg.contains(*ab), {a, b}, "combine left the carrier: " + ab->show());
      for (const auto& c : carrier) {
        auto bc = try_combine(alg, b, c);
        std::optional<grade> lhs = ab ? try_combine(alg, *ab, c) : std::nullopt;
        std::optional<grade> rhs = bc ? try_combine(alg, a, *bc) : std::nullopt;
        if (!lhs && !rhs) {
          ++report.skipped;
          continue;
        }
        assoc.check(lhs && rhs && *lhs == *rhs, {a, b, c},
                    (lhs ? lhs->show() : "overflow") + " vs " + (rhs ? rhs->show() : "overflow"));
      }
    }
  }
  report.laws = {closure.law, assoc.law, left_id.law, right_id.law};

  if (!alg.has_order()) return report;

  law_tracker refl("reflexive"), antisym("antisymmetric"), trans("transitive"), least("unit_least"),
      mono_l("monotone_left"), mono_r("monotone_right"), upper("upper_bound"), lub("least_upper_bound");
  for (const auto& a : carrier) {
    refl.check(alg.leq(a, a), {a});
    least.check(alg.leq(alg.unit(), a), {a});
    for (const auto& b : carrier) {
      bool ab_le = alg.leq(a, b);
      antisym.check(!(ab_le && alg.leq(b, a)) || a == b, {a, b});
      grade ab = alg.combine(a, b);
      upper.check(alg.leq(a, ab) && alg.leq(b, ab), {a, b});
      for (const auto& c : carrier) {
        trans.check(!(ab_le && alg.leq(b, c)) || alg.leq(a, c), {a, b, c});
        if (ab_le) {
          mono_l.check(alg.leq(alg.combine(a, c), alg.combine(b, c)), {a, b, c});
          mono_r.check(alg.leq(alg.combine(c, a), alg.combine(c, b)), {a, b, c});
        }
        lub.check(!(alg.leq(a, c) && alg.leq(b, c)) || alg.leq(ab, c), {a, b, c});
      }
    }
  }
  for (auto* t : {&refl, &antisym, &trans, &least, &mono_l, &mono_r, &upper, &lub}) report.laws.push_back(t->law);
  return report;
}

}  // namespace gradeff
