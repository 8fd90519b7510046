#pragma once

// The semantic universe: finite first-order values, environment records, trace
// tuples and intensional functions over enumerable domains, together with the
// type descriptors that make every domain enumerable.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gradeff {

class value;
class sem_type;

// Number of inhabitants, or nullopt when it exceeds 2^62 (or a function
// domain is itself too large to tabulate).
std::optional<std::uint64_t> cardinality(const sem_type& t);

// All inhabitants in rank order, memoized on the type. Throws
// enumeration_budget_exceeded when the cardinality is above `limit`.
const std::vector<value>& enumerate(const sem_type& t, std::uint64_t limit);

class sem_type {
 public:
  enum class kind { unit, boolean, int_mod, product, function, one, record, tuple };

  sem_type();  // unit

  static sem_type unit();
  static sem_type boolean();
  static sem_type int_mod(int modulus = 4);
  static sem_type product(sem_type first, sem_type second);
  static sem_type function(sem_type domain, sem_type codomain);
  // The one-point object; its single inhabitant is value::absent().
  static sem_type one();
  // A partial record admits any subset of the declared fields.
  static sem_type record(std::map<std::string, sem_type> fields, bool partial = false);
  static sem_type tuple(std::vector<sem_type> elements);

  kind tag() const;
  int modulus() const;
  const sem_type& first() const;
  const sem_type& second() const;
  const sem_type& domain() const;
  const sem_type& codomain() const;
  const std::map<std::string, sem_type>& fields() const;
  bool partial() const;
  const std::vector<sem_type>& elements() const;

  std::string show() const;

  friend bool operator==(const sem_type& a, const sem_type& b);
  friend std::optional<std::uint64_t> cardinality(const sem_type& t);
  friend const std::vector<value>& enumerate(const sem_type& t, std::uint64_t limit);

 private:
  struct node;
  explicit sem_type(std::shared_ptr<const node> n) : node_(std::move(n)) {}
  std::shared_ptr<const node> node_;
};

class value {
 public:
  enum class kind { unit, boolean, int_mod, pair, fun, absent, record, tuple };
  using mapping = std::function<value(const value&)>;

  value();  // unit

  static value unit();
  static value boolean(bool b);
  // Reduces k into [0, m).
  static value int_mod(long k, int m = 4);
  static value pair(value first, value second);
  static value fun(sem_type domain, mapping map);
  static value absent();
  static value record(std::map<std::string, value> fields);
  static value tuple(std::vector<value> elements);

  kind tag() const;
  bool is(kind k) const { return tag() == k; }

  bool as_bool() const;
  int residue() const;
  int modulus() const;
  const value& first() const;
  const value& second() const;
  const sem_type& domain() const;
  const std::map<std::string, value>& fields() const;
  const value& field(const std::string& name) const;
  const std::vector<value>& elements() const;

  // Applies a function value. Record-domain functions reject arguments whose
  // key set differs from the domain (env_domain_mismatch).
  value operator()(const value& arg) const;

  // Restricts a record to the given keys; all keys must be present.
  value restrict_to(const std::map<std::string, sem_type>& keys) const;

 private:
  struct rep;
  explicit value(std::shared_ptr<const rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const rep> rep_;
};

inline constexpr std::uint64_t default_domain_limit = 256;

value unrank(const sem_type& t, std::uint64_t i);
std::uint64_t rank(const value& v, const sem_type& t);

// Pseudo-random inhabitant; function values become random tables.
value sample(const sem_type& t, std::mt19937_64& rng);

// Structural equality; functions compare pointwise over their enumerated
// domain. Throws enumeration_budget_exceeded if a domain exceeds the limit.
bool equal(const value& a, const value& b, std::uint64_t domain_limit = default_domain_limit);

// Number of leaf comparisons `equal` performs on values of this type.
std::uint64_t equality_cost(const sem_type& t);

// Shape check: the value inhabits the type. Function outputs are checked
// pointwise when the domain is within the limit. Never throws.
bool conforms(const value& v, const sem_type& t, std::uint64_t domain_limit = default_domain_limit);

std::string show(const value& v);

}  // namespace gradeff
