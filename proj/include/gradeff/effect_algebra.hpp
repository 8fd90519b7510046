#pragma once

// Index categories: monoids of effect annotations, optionally ordered into
// join-semilattices that support sub-effecting.

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace gradeff {

struct effect_token {
  enum class kind { implicit_param, read, write, out };

  kind k = kind::implicit_param;
  std::string name;

  static effect_token ip(std::string n) { return {kind::implicit_param, std::move(n)}; }
  static effect_token rd(std::string n) { return {kind::read, std::move(n)}; }
  static effect_token wr(std::string n) { return {kind::write, std::move(n)}; }
  static effect_token out(std::string n) { return {kind::out, std::move(n)}; }

  // "ip p", "rd r", "wr r", "out t"
  std::string show() const;
  static std::optional<effect_token> parse(const std::string& text);

  auto operator<=>(const effect_token&) const = default;
};

using token_set = std::set<effect_token>;
using tag_trace = std::vector<std::string>;

struct trivial_grade {
  auto operator<=>(const trivial_grade&) const = default;
};

// An element of some algebra's carrier. Canonical by construction (sets are
// sorted, traces are sequences), so == is index equality.
class grade {
 public:
  grade() = default;
  grade(trivial_grade g) : rep_(g) {}
  grade(token_set s) : rep_(std::move(s)) {}
  grade(bool b) : rep_(b) {}
  grade(tag_trace t) : rep_(std::move(t)) {}

  bool is_trivial() const { return std::holds_alternative<trivial_grade>(rep_); }
  bool is_set() const { return std::holds_alternative<token_set>(rep_); }
  bool is_bool() const { return std::holds_alternative<bool>(rep_); }
  bool is_trace() const { return std::holds_alternative<tag_trace>(rep_); }

  const token_set& tokens() const { return std::get<token_set>(rep_); }
  bool flag() const { return std::get<bool>(rep_); }
  const tag_trace& trace() const { return std::get<tag_trace>(rep_); }

  // {ip p, rd r} | t | f | [a, b] | 1
  std::string show() const;

  auto operator<=>(const grade&) const = default;

 private:
  std::variant<trivial_grade, token_set, bool, tag_trace> rep_;
};

class effect_algebra {
 public:
  // The raw operations backing an algebra. Shipped algebras come from the
  // factories below; tests build broken ones through this struct.
  struct definition {
    std::string name;
    grade unit;
    std::function<grade(const grade&, const grade&)> combine;
    std::function<bool(const grade&, const grade&)> leq;  // empty for plain monoids
    std::function<std::vector<grade>()> carrier;
    std::uint64_t carrier_size = 0;
    std::function<bool(const grade&)> contains;
    // Grade of a single primitive occurrence, or nullopt if unsupported.
    std::function<std::optional<grade>(const effect_token&)> primitive;
    // Grade <-> annotation tokens as written in arrow types.
    std::function<std::vector<effect_token>(const grade&)> to_tokens;
    std::function<std::optional<grade>(const std::vector<effect_token>&)> from_tokens;
  };

  explicit effect_algebra(definition def);

  const std::string& name() const { return def_->name; }
  const grade& unit() const { return def_->unit; }
  grade combine(const grade& a, const grade& b) const;
  grade combine(const std::vector<grade>& gs) const;

  bool has_order() const { return static_cast<bool>(def_->leq); }
  // Throws no_lattice when the algebra is unordered.
  bool leq(const grade& a, const grade& b) const;
  // Least upper bound; for the shipped lattices this is combine.
  grade join(const grade& a, const grade& b) const;

  std::uint64_t carrier_size() const { return def_->carrier_size; }
  // Throws enumeration_budget_exceeded when the carrier exceeds the budget.
  std::vector<grade> carrier(std::uint64_t budget) const;
  bool contains(const grade& g) const { return def_->contains(g); }

  std::optional<grade> primitive(const effect_token& t) const { return def_->primitive(t); }
  std::vector<effect_token> to_tokens(const grade& g) const { return def_->to_tokens(g); }
  std::optional<grade> from_tokens(const std::vector<effect_token>& ts) const { return def_->from_tokens(ts); }

  // Two algebras are interchangeable when they are the same object or share
  // a name (names encode the construction parameters).
  friend bool operator==(const effect_algebra& a, const effect_algebra& b) {
    return a.def_ == b.def_ || a.def_->name == b.def_->name;
  }

 private:
  std::shared_ptr<const definition> def_;
};

// (P(tokens), union, empty) ordered by inclusion.
effect_algebra powerset_algebra(const token_set& tokens);
// ({f, t}, and, t); plain monoid.
effect_algebra bool_conj_algebra();
// Sequences over tags of length <= max_len under concatenation; combine
// throws index_overflow past the bound.
effect_algebra trace_algebra(const std::set<std::string>& tags, std::size_t max_len);
// The one-object monoid.
effect_algebra trivial_algebra();

struct algebra_law {
  std::string name;
  bool passed = true;
  std::vector<grade> witness;  // counterexample elements when failed
  std::string detail;
};

struct algebra_law_report {
  std::string algebra;
  std::uint64_t carrier_size = 0;
  std::uint64_t skipped = 0;  // triples where both sides overflow the bound
  std::vector<algebra_law> laws;

  bool all_passed() const;
  const algebra_law* find(const std::string& law) const;
};

inline constexpr std::uint64_t default_algebra_budget = 1'000'000;

// Exhaustive check of the monoid laws (and, when ordered, the partial-order,
// least-element, monotonicity and least-upper-bound laws). Throws
// enumeration_budget_exceeded if carrier^3 exceeds the budget.
algebra_law_report check_algebra_laws(const effect_algebra& alg,
                                      std::uint64_t budget = default_algebra_budget);

}  // namespace gradeff
