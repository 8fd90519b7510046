#include "gradeff/value.hpp"

#include <mutex>
#include <sstream>
#include <variant>

#include "gradeff/error.hpp"

namespace gradeff {

namespace {

constexpr std::uint64_t cardinality_cap = std::uint64_t{1} << 62;

std::optional<std::uint64_t> mul(std::optional<std::uint64_t> a, std::optional<std::uint64_t> b) {
  if (!a || !b) return std::nullopt;
  if (*a == 0 || *b == 0) return 0;
  if (*a > cardinality_cap / *b) return std::nullopt;
  return *a * *b;
}

std::optional<std::uint64_t> power(std::optional<std::uint64_t> base, std::optional<std::uint64_t> exp) {
  if (!base || !exp) return std::nullopt;
  std::optional<std::uint64_t> acc = 1;
  for (std::uint64_t i = 0; i < *exp; ++i) {
    acc = mul(acc, base);
    if (!acc) return std::nullopt;
    if (*acc == 0 || *acc == 1) break;
  }
  return acc;
}

}  // namespace

////////////////////////////////////////////////////////////////////////////////
// sem_type
////////////////////////////////////////////////////////////////////////////////

struct sem_type::node {
  kind k = kind::unit;
  int modulus = 0;
  std::vector<sem_type> children;  // product: 2, function: dom/cod, tuple: n
  std::map<std::string, sem_type> fields;
  bool partial = false;
  std::optional<std::uint64_t> card;

  // memoized enumeration, filled on first use
  mutable std::once_flag enum_once;
  mutable std::vector<value> enumeration;
};

namespace {

std::optional<std::uint64_t> compute_cardinality(const sem_type& t);

}  // namespace

sem_type::sem_type() : sem_type(unit()) {}

sem_type sem_type::unit() {
  static const sem_type t = [] {
    auto n = std::make_shared<node>();
    n->k = kind::unit;
    n->card = 1;
    return sem_type(std::move(n));
  }();
  return t;
}

sem_type sem_type::boolean() {
  static const sem_type t = [] {
    auto n = std::make_shared<node>();
    n->k = kind::boolean;
    n->card = 2;
    return sem_type(std::move(n));
  }();
  return t;
}

sem_type sem_type::int_mod(int modulus) {
  if (modulus < 1) throw error(error_kind::type, "int_mod modulus must be positive");
  auto n = std::make_shared<node>();
  n->k = kind::int_mod;
  n->modulus = modulus;
  n->card = static_cast<std::uint64_t>(modulus);
  return sem_type(std::move(n));
}

sem_type sem_type::product(sem_type first, sem_type second) {
  auto n = std::make_shared<node>();
  n->k = kind::product;
  n->children = {std::move(first), std::move(second)};
  sem_type t(n);
  n->card = compute_cardinality(t);
  return t;
}

sem_type sem_type::function(sem_type domain, sem_type codomain) {
  auto n = std::make_shared<node>();
  n->k = kind::function;
  n->children = {std::move(domain), std::move(codomain)};
  sem_type t(n);
  n->card = compute_cardinality(t);
  return t;
}

sem_type sem_type::one() {
  static const sem_type t = [] {
    auto n = std::make_shared<node>();
    n->k = kind::one;
    n->card = 1;
    return sem_type(std::move(n));
  }();
  return t;
}

sem_type sem_type::record(std::map<std::string, sem_type> fields, bool partial) {
  auto n = std::make_shared<node>();
  n->k = kind::record;
  n->fields = std::move(fields);
  n->partial = partial;
  sem_type t(n);
  n->card = compute_cardinality(t);
  return t;
}

sem_type sem_type::tuple(std::vector<sem_type> elements) {
  auto n = std::make_shared<node>();
  n->k = kind::tuple;
  n->children = std::move(elements);
  sem_type t(n);
  n->card = compute_cardinality(t);
  return t;
}

sem_type::kind sem_type::tag() const { return node_->k; }
int sem_type::modulus() const { return node_->modulus; }
const sem_type& sem_type::first() const { return node_->children.at(0); }
const sem_type& sem_type::second() const { return node_->children.at(1); }
const sem_type& sem_type::domain() const { return node_->children.at(0); }
const sem_type& sem_type::codomain() const { return node_->children.at(1); }
const std::map<std::string, sem_type>& sem_type::fields() const { return node_->fields; }
bool sem_type::partial() const { return node_->partial; }
const std::vector<sem_type>& sem_type::elements() const { return node_->children; }

bool operator==(const sem_type& a, const sem_type& b) {
  if (a.node_ == b.node_) return true;
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case sem_type::kind::unit:
    case sem_type::kind::boolean:
    case sem_type::kind::one:
      return true;
    case sem_type::kind::int_mod:
      return a.modulus() == b.modulus();
    case sem_type::kind::record:
      return a.partial() == b.partial() && a.fields() == b.fields();
    case sem_type::kind::product:
    case sem_type::kind::function:
    case sem_type::kind::tuple:
      return a.node_->children == b.node_->children;
  }
  return false;
}

std::string sem_type::show() const {
  std::ostringstream os;
  switch (tag()) {
    case kind::unit: return "unit";
    case kind::boolean: return "bool";
    case kind::one: return "1";
    case kind::int_mod: os << "int" << modulus(); break;
    case kind::product: os << "(" << first().show() << " * " << second().show() << ")"; break;
    case kind::function: os << "(" << domain().show() << " => " << codomain().show() << ")"; break;
    case kind::record: {
      os << (partial() ? "{?" : "{");
      bool first_field = true;
      for (const auto& [name, t] : fields()) {
        os << (first_field ? "" : ", ") << name << ":" << t.show();
        first_field = false;
      }
      os << "}";
      break;
    }
    case kind::tuple: {
      os << "<";
      for (std::size_t i = 0; i < elements().size(); ++i) os << (i ? ", " : "") << elements()[i].show();
      os << ">";
      break;
    }
  }
  return os.str();
}

////////////////////////////////////////////////////////////////////////////////
// value
////////////////////////////////////////////////////////////////////////////////

namespace {

struct unit_rep {};
struct absent_rep {};
struct int_rep {
  int k;
  int m;
};
struct pair_rep {
  value first, second;
};
struct fun_rep {
  sem_type domain;
  value::mapping map;
};

}  // namespace

struct value::rep {
  std::variant<unit_rep, bool, int_rep, pair_rep, fun_rep, absent_rep, std::map<std::string, value>,
               std::vector<value>>
      data;
};

namespace {

template <class T>
const T& expect(const auto& data, const char* what) {
  if (const T* p = std::get_if<T>(&data)) return *p;
  throw error(error_kind::index_mismatch, std::string("expected a ") + what + " value");
}

}  // namespace

value::value() : value(unit()) {}

value value::unit() {
  static const value v(std::make_shared<rep>(rep{unit_rep{}}));
  return v;
}

value value::boolean(bool b) {
  static const value t(std::make_shared<rep>(rep{true}));
  static const value f(std::make_shared<rep>(rep{false}));
  return b ? t : f;
}

value value::int_mod(long k, int m) {
  if (m < 1) throw error(error_kind::type, "int_mod modulus must be positive");
  long r = k % m;
  if (r < 0) r += m;
  return value(std::make_shared<rep>(rep{int_rep{static_cast<int>(r), m}}));
}

value value::pair(value first, value second) {
  return value(std::make_shared<rep>(rep{pair_rep{std::move(first), std::move(second)}}));
}

value value::fun(sem_type domain, mapping map) {
  return value(std::make_shared<rep>(rep{fun_rep{std::move(domain), std::move(map)}}));
}

value value::absent() {
  static const value v(std::make_shared<rep>(rep{absent_rep{}}));
  return v;
}

value value::record(std::map<std::string, value> fields) {
  return value(std::make_shared<rep>(rep{std::move(fields)}));
}

value value::tuple(std::vector<value> elements) {
  return value(std::make_shared<rep>(rep{std::move(elements)}));
}

value::kind value::tag() const { return static_cast<kind>(rep_->data.index()); }

bool value::as_bool() const { return expect<bool>(rep_->data, "bool"); }
int value::residue() const { return expect<int_rep>(rep_->data, "int").k; }
int value::modulus() const { return expect<int_rep>(rep_->data, "int").m; }
const value& value::first() const { return expect<pair_rep>(rep_->data, "pair").first; }
const value& value::second() const { return expect<pair_rep>(rep_->data, "pair").second; }
const sem_type& value::domain() const { return expect<fun_rep>(rep_->data, "function").domain; }

const std::map<std::string, value>& value::fields() const {
  return expect<std::map<std::string, value>>(rep_->data, "record");
}

const value& value::field(const std::string& name) const {
  const auto& fs = fields();
  auto it = fs.find(name);
  if (it == fs.end()) throw error(error_kind::env_domain_mismatch, "record has no field '" + name + "'");
  return it->second;
}

const std::vector<value>& value::elements() const {
  return expect<std::vector<value>>(rep_->data, "tuple");
}

value value::operator()(const value& arg) const {
  const auto& f = expect<fun_rep>(rep_->data, "function");
  if (f.domain.tag() == sem_type::kind::record && !f.domain.partial()) {
    const auto& want = f.domain.fields();
    const auto& got = arg.fields();
    bool same = want.size() == got.size();
    auto gi = got.begin();
    for (auto wi = want.begin(); same && wi != want.end(); ++wi, ++gi) same = wi->first == gi->first;
    if (!same) {
      throw error(error_kind::env_domain_mismatch,
                  "environment " + show(arg) + " does not match domain " + f.domain.show());
    }
  }
  return f.map(arg);
}

value value::restrict_to(const std::map<std::string, sem_type>& keys) const {
  const auto& fs = fields();
  std::map<std::string, value> out;
  for (const auto& [name, t] : keys) {
    auto it = fs.find(name);
    if (it == fs.end()) {
      throw error(error_kind::env_domain_mismatch, "environment " + show(*this) + " lacks '" + name + "'");
    }
    out.emplace(name, it->second);
  }
  return record(std::move(out));
}

////////////////////////////////////////////////////////////////////////////////
// enumeration
////////////////////////////////////////////////////////////////////////////////

namespace {

std::optional<std::uint64_t> compute_cardinality(const sem_type& t) {
  switch (t.tag()) {
    case sem_type::kind::unit:
    case sem_type::kind::one:
      return 1;
    case sem_type::kind::boolean:
      return 2;
    case sem_type::kind::int_mod:
      return static_cast<std::uint64_t>(t.modulus());
    case sem_type::kind::product:
      return mul(cardinality(t.first()), cardinality(t.second()));
    case sem_type::kind::function: {
      auto dom = cardinality(t.domain());
      if (!dom || *dom > (std::uint64_t{1} << 20)) return std::nullopt;
      return power(cardinality(t.codomain()), dom);
    }
    case sem_type::kind::record: {
      std::optional<std::uint64_t> acc = 1;
      for (const auto& [_, ft] : t.fields()) {
        auto c = cardinality(ft);
        if (t.partial() && c) c = *c + 1;
        acc = mul(acc, c);
      }
      return acc;
    }
    case sem_type::kind::tuple: {
      std::optional<std::uint64_t> acc = 1;
      for (const auto& e : t.elements()) acc = mul(acc, cardinality(e));
      return acc;
    }
  }
  return std::nullopt;
}

std::uint64_t require_card(const sem_type& t) {
  auto c = cardinality(t);
  if (!c) throw error(error_kind::enumeration_budget_exceeded, "type " + t.show() + " is not enumerable");
  return *c;
}

value table_function(const sem_type& dom, std::vector<value> table) {
  auto shared = std::make_shared<const std::vector<value>>(std::move(table));
  return value::fun(dom, [dom, shared](const value& x) { return (*shared)[rank(x, dom)]; });
}

}  // namespace

std::optional<std::uint64_t> cardinality(const sem_type& t) { return t.node_->card; }

value unrank(const sem_type& t, std::uint64_t i) {
  switch (t.tag()) {
    case sem_type::kind::unit:
      return value::unit();
    case sem_type::kind::one:
      return value::absent();
    case sem_type::kind::boolean:
      return value::boolean(i % 2 == 1);
    case sem_type::kind::int_mod:
      return value::int_mod(static_cast<long>(i % t.modulus()), t.modulus());
    case sem_type::kind::product: {
      std::uint64_t a = require_card(t.first());
      return value::pair(unrank(t.first(), i % a), unrank(t.second(), i / a));
    }
    case sem_type::kind::function: {
      const auto& dom_values = enumerate(t.domain(), std::uint64_t{1} << 20);
      std::uint64_t c = require_card(t.codomain());
      std::vector<value> table;
      table.reserve(dom_values.size());
      for (std::size_t j = 0; j < dom_values.size(); ++j) {
        table.push_back(unrank(t.codomain(), i % c));
        i /= c;
      }
      return table_function(t.domain(), std::move(table));
    }
    case sem_type::kind::record: {
      std::map<std::string, value> out;
      for (const auto& [name, ft] : t.fields()) {
        std::uint64_t c = require_card(ft) + (t.partial() ? 1 : 0);
        std::uint64_t digit = i % c;
        i /= c;
        if (t.partial()) {
          if (digit > 0) out.emplace(name, unrank(ft, digit - 1));
        } else {
          out.emplace(name, unrank(ft, digit));
        }
      }
      return value::record(std::move(out));
    }
    case sem_type::kind::tuple: {
      std::vector<value> out;
      for (const auto& et : t.elements()) {
        std::uint64_t c = require_card(et);
        out.push_back(unrank(et, i % c));
        i /= c;
      }
      return value::tuple(std::move(out));
    }
  }
  throw error(error_kind::type, "unrank: unknown type");
}

std::uint64_t rank(const value& v, const sem_type& t) {
  switch (t.tag()) {
    case sem_type::kind::unit:
    case sem_type::kind::one:
      return 0;
    case sem_type::kind::boolean:
      return v.as_bool() ? 1 : 0;
    case sem_type::kind::int_mod:
      return static_cast<std::uint64_t>(v.residue());
    case sem_type::kind::product:
      return rank(v.first(), t.first()) + require_card(t.first()) * rank(v.second(), t.second());
    case sem_type::kind::function: {
      const auto& dom_values = enumerate(t.domain(), std::uint64_t{1} << 20);
      std::uint64_t c = require_card(t.codomain());
      std::uint64_t acc = 0, scale = 1;
      for (const auto& d : dom_values) {
        acc += scale * rank(v(d), t.codomain());
        scale *= c;
      }
      return acc;
    }
    case sem_type::kind::record: {
      std::uint64_t acc = 0, scale = 1;
      const auto& fs = v.fields();
      for (const auto& [name, ft] : t.fields()) {
        std::uint64_t c = require_card(ft) + (t.partial() ? 1 : 0);
        auto it = fs.find(name);
        std::uint64_t digit = 0;
        if (t.partial()) {
          digit = it == fs.end() ? 0 : 1 + rank(it->second, ft);
        } else {
          if (it == fs.end()) throw error(error_kind::env_domain_mismatch, "record lacks field '" + name + "'");
          digit = rank(it->second, ft);
        }
        acc += scale * digit;
        scale *= c;
      }
      return acc;
    }
    case sem_type::kind::tuple: {
      std::uint64_t acc = 0, scale = 1;
      const auto& es = v.elements();
      for (std::size_t j = 0; j < t.elements().size(); ++j) {
        acc += scale * rank(es.at(j), t.elements()[j]);
        scale *= require_card(t.elements()[j]);
      }
      return acc;
    }
  }
  return 0;
}

const std::vector<value>& enumerate(const sem_type& t, std::uint64_t limit) {
  auto c = cardinality(t);
  if (!c || *c > limit) {
    throw error(error_kind::enumeration_budget_exceeded,
                "cannot enumerate " + t.show() + " within " + std::to_string(limit) + " elements");
  }
  const auto& n = *t.node_;
  std::call_once(n.enum_once, [&] {
    std::vector<value> out;
    out.reserve(*c);
    for (std::uint64_t i = 0; i < *c; ++i) out.push_back(unrank(t, i));
    n.enumeration = std::move(out);
  });
  return n.enumeration;
}

value sample(const sem_type& t, std::mt19937_64& rng) {
  switch (t.tag()) {
    case sem_type::kind::product:
      return value::pair(sample(t.first(), rng), sample(t.second(), rng));
    case sem_type::kind::function: {
      const auto& dom_values = enumerate(t.domain(), std::uint64_t{1} << 16);
      std::vector<value> table;
      table.reserve(dom_values.size());
      for (std::size_t j = 0; j < dom_values.size(); ++j) table.push_back(sample(t.codomain(), rng));
      return table_function(t.domain(), std::move(table));
    }
    case sem_type::kind::record: {
      std::map<std::string, value> out;
      for (const auto& [name, ft] : t.fields()) {
        if (t.partial() && std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
        out.emplace(name, sample(ft, rng));
      }
      return value::record(std::move(out));
    }
    case sem_type::kind::tuple: {
      std::vector<value> out;
      for (const auto& et : t.elements()) out.push_back(sample(et, rng));
      return value::tuple(std::move(out));
    }
    default: {
      std::uint64_t c = require_card(t);
      return unrank(t, std::uniform_int_distribution<std::uint64_t>(0, c - 1)(rng));
    }
  }
}

////////////////////////////////////////////////////////////////////////////////
// equality, conformance, printing
////////////////////////////////////////////////////////////////////////////////

bool equal(const value& a, const value& b, std::uint64_t domain_limit) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case value::kind::unit:
    case value::kind::absent:
      return true;
    case value::kind::boolean:
      return a.as_bool() == b.as_bool();
    case value::kind::int_mod:
      return a.residue() == b.residue() && a.modulus() == b.modulus();
    case value::kind::pair:
      return equal(a.first(), b.first(), domain_limit) && equal(a.second(), b.second(), domain_limit);
    case value::kind::fun: {
      if (!(a.domain() == b.domain())) return false;
      for (const auto& x : enumerate(a.domain(), domain_limit)) {
        if (!equal(a(x), b(x), domain_limit)) return false;
      }
      return true;
    }
    case value::kind::record: {
      const auto& fa = a.fields();
      const auto& fb = b.fields();
      if (fa.size() != fb.size()) return false;
      for (auto ia = fa.begin(), ib = fb.begin(); ia != fa.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !equal(ia->second, ib->second, domain_limit)) return false;
      }
      return true;
    }
    case value::kind::tuple: {
      const auto& ea = a.elements();
      const auto& eb = b.elements();
      if (ea.size() != eb.size()) return false;
      for (std::size_t i = 0; i < ea.size(); ++i) {
        if (!equal(ea[i], eb[i], domain_limit)) return false;
      }
      return true;
    }
  }
  return false;
}

std::uint64_t equality_cost(const sem_type& t) {
  switch (t.tag()) {
    case sem_type::kind::product:
      return equality_cost(t.first()) + equality_cost(t.second());
    case sem_type::kind::function: {
      auto c = cardinality(t.domain());
      std::uint64_t d = c ? *c : cardinality_cap;
      std::uint64_t inner = equality_cost(t.codomain());
      return d > cardinality_cap / std::max<std::uint64_t>(inner, 1) ? cardinality_cap : d * inner;
    }
    case sem_type::kind::record: {
      std::uint64_t acc = 0;
      for (const auto& [_, ft] : t.fields()) acc += equality_cost(ft);
      return std::max<std::uint64_t>(acc, 1);
    }
    case sem_type::kind::tuple: {
      std::uint64_t acc = 0;
      for (const auto& e : t.elements()) acc += equality_cost(e);
      return std::max<std::uint64_t>(acc, 1);
    }
    default:
      return 1;
  }
}

bool conforms(const value& v, const sem_type& t, std::uint64_t domain_limit) {
  try {
    switch (t.tag()) {
      case sem_type::kind::unit:
        return v.is(value::kind::unit);
      case sem_type::kind::one:
        return v.is(value::kind::absent);
      case sem_type::kind::boolean:
        return v.is(value::kind::boolean);
      case sem_type::kind::int_mod:
        return v.is(value::kind::int_mod) && v.modulus() == t.modulus();
      case sem_type::kind::product:
        return v.is(value::kind::pair) && conforms(v.first(), t.first(), domain_limit) &&
               conforms(v.second(), t.second(), domain_limit);
      case sem_type::kind::function: {
        if (!v.is(value::kind::fun) || !(v.domain() == t.domain())) return false;
        auto c = cardinality(t.domain());
        if (!c || *c > domain_limit) return true;
        for (const auto& x : enumerate(t.domain(), domain_limit)) {
          if (!conforms(v(x), t.codomain(), domain_limit)) return false;
        }
        return true;
      }
      case sem_type::kind::record: {
        if (!v.is(value::kind::record)) return false;
        const auto& fs = v.fields();
        if (!t.partial() && fs.size() != t.fields().size()) return false;
        for (const auto& [name, fv] : fs) {
          auto it = t.fields().find(name);
          if (it == t.fields().end() || !conforms(fv, it->second, domain_limit)) return false;
        }
        return true;
      }
      case sem_type::kind::tuple: {
        if (!v.is(value::kind::tuple) || v.elements().size() != t.elements().size()) return false;
        for (std::size_t i = 0; i < t.elements().size(); ++i) {
          if (!conforms(v.elements()[i], t.elements()[i], domain_limit)) return false;
        }
        return true;
      }
    }
  } catch (const error&) {
    return false;
  }
  return false;
}

std::string show(const value& v) {
  std::ostringstream os;
  switch (v.tag()) {
    case value::kind::unit:
      return "unit";
    case value::kind::absent:
      return "absent";
    case value::kind::boolean:
      return v.as_bool() ? "true" : "false";
    case value::kind::int_mod:
      os << v.residue();
      if (v.modulus() != 4) os << "%" << v.modulus();
      break;
    case value::kind::pair:
      os << "(" << show(v.first()) << ", " << show(v.second()) << ")";
      break;
    case value::kind::fun: {
      auto c = cardinality(v.domain());
      if (!c || *c > 16) return "<fun>";
      os << "[";
      bool first = true;
      try {
        for (const auto& x : enumerate(v.domain(), 16)) {
          os << (first ? "" : "; ") << show(x) << " -> " << show(v(x));
          first = false;
        }
      } catch (const error&) {
        return "<fun>";
      }
      os << "]";
      break;
    }
    case value::kind::record: {
      os << "{";
      bool first = true;
      for (const auto& [name, fv] : v.fields()) {
        os << (first ? "" : ", ") << name << "=" << show(fv);
        first = false;
      }
      os << "}";
      break;
    }
    case value::kind::tuple: {
      os << "<";
      for (std::size_t i = 0; i < v.elements().size(); ++i) os << (i ? ", " : "") << show(v.elements()[i]);
      os << ">";
      break;
    }
  }
  return os.str();
}

}  // namespace gradeff
