#include "gradeff/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace gradeff {

////////////////////////////////////////////////////////////////////////////////
// type_expr
////////////////////////////////////////////////////////////////////////////////

type_expr_ptr type_expr::make_base(base_type b) {
  auto t = std::make_shared<type_expr>();
  t->k = kind::base;
  t->base = b;
  return t;
}

type_expr_ptr type_expr::make_product(type_expr_ptr a, type_expr_ptr b) {
  auto t = std::make_shared<type_expr>();
  t->k = kind::product;
  t->first = std::move(a);
  t->second = std::move(b);
  return t;
}

type_expr_ptr type_expr::make_arrow(type_expr_ptr dom, std::vector<std::string> latent, type_expr_ptr cod) {
  auto t = std::make_shared<type_expr>();
  t->k = kind::arrow;
  t->first = std::move(dom);
  t->second = std::move(cod);
  t->latent = std::move(latent);
  return t;
}

namespace {

std::string join_items(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

// Arrow domains that are arrows need parentheses; products are always
// bracketed already.
std::string show_type_expr(const type_expr& t) {
  switch (t.k) {
    case type_expr::kind::base: return std::string(to_string(t.base));
    case type_expr::kind::product: return "(" + show_type_expr(*t.first) + ", " + show_type_expr(*t.second) + ")";
    case type_expr::kind::arrow: {
      std::string dom = show_type_expr(*t.first);
      if (t.first->k == type_expr::kind::arrow) dom = "(" + dom + ")";
      return dom + " -> {" + join_items(t.latent) + "} " + show_type_expr(*t.second);
    }
  }
  return "?";
}

}  // namespace

std::string type_expr::show() const { return show_type_expr(*this); }

bool operator==(const type_expr& a, const type_expr& b) {
  if (a.k != b.k) return false;
  switch (a.k) {
    case type_expr::kind::base: return a.base == b.base;
    case type_expr::kind::product: return *a.first == *b.first && *a.second == *b.second;
    case type_expr::kind::arrow: return a.latent == b.latent && *a.first == *b.first && *a.second == *b.second;
  }
  return false;
}

////////////////////////////////////////////////////////////////////////////////
// obj_type
////////////////////////////////////////////////////////////////////////////////

struct obj_type::node {
  kind k = kind::unit;
  std::optional<obj_type> first;
  std::optional<obj_type> second;
  grade latent;
};

obj_type::obj_type() : obj_type(unit()) {}

obj_type obj_type::unit() {
  static const auto n = std::make_shared<const node>(node{kind::unit, {}, {}, {}});
  return obj_type(n);
}

obj_type obj_type::boolean() {
  static const auto n = std::make_shared<const node>(node{kind::boolean, {}, {}, {}});
  return obj_type(n);
}

obj_type obj_type::int4() {
  static const auto n = std::make_shared<const node>(node{kind::int4, {}, {}, {}});
  return obj_type(n);
}

obj_type obj_type::of(base_type b) {
  switch (b) {
    case base_type::unit: return unit();
    case base_type::boolean: return boolean();
    case base_type::int4: return int4();
  }
  return unit();
}

obj_type obj_type::product(obj_type a, obj_type b) {
  return obj_type(std::make_shared<const node>(node{kind::product, std::move(a), std::move(b), {}}));
}

obj_type obj_type::arrow(obj_type dom, grade latent, obj_type cod) {
  return obj_type(std::make_shared<const node>(node{kind::arrow, std::move(dom), std::move(cod), std::move(latent)}));
}

obj_type::kind obj_type::tag() const { return node_->k; }

const obj_type& obj_type::first() const {
  if (!node_->first) throw error(error_kind::type, "type " + show() + " has no components");
  return *node_->first;
}

const obj_type& obj_type::second() const {
  if (!node_->second) throw error(error_kind::type, "type " + show() + " has no components");
  return *node_->second;
}

const grade& obj_type::latent() const { return node_->latent; }

bool obj_type::is_first_order() const {
  switch (tag()) {
    case kind::arrow: return false;
    case kind::product: return first().is_first_order() && second().is_first_order();
    default: return true;
  }
}

std::string obj_type::show() const { return to_expr()->show(); }

type_expr_ptr obj_type::to_expr() const {
  switch (tag()) {
    case kind::unit: return type_expr::make_base(base_type::unit);
    case kind::boolean: return type_expr::make_base(base_type::boolean);
    case kind::int4: return type_expr::make_base(base_type::int4);
    case kind::product: return type_expr::make_product(first().to_expr(), second().to_expr());
    case kind::arrow: return type_expr::make_arrow(first().to_expr(), latent_items(latent()), second().to_expr());
  }
  return nullptr;
}

bool operator==(const obj_type& a, const obj_type& b) {
  if (a.node_ == b.node_) return true;
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case obj_type::kind::product: return a.first() == b.first() && a.second() == b.second();
    case obj_type::kind::arrow:
      return a.latent() == b.latent() && a.first() == b.first() && a.second() == b.second();
    default: return true;
  }
}

std::vector<std::string> latent_items(const grade& g) {
  std::vector<std::string> out;
  if (g.is_set()) {
    for (const auto& t : g.tokens()) out.push_back(t.show());
  } else if (g.is_trace()) {
    for (const auto& tag : g.trace()) out.push_back(effect_token::out(tag).show());
  } else if (g.is_bool()) {
    out.push_back(g.flag() ? "t" : "f");
  }
  return out;
}

std::string show_latent(const grade& g) { return "{" + join_items(latent_items(g)) + "}"; }

obj_type resolve(const type_expr& t, const effect_algebra& alg, const signature& sig) {
  switch (t.k) {
    case type_expr::kind::base: return obj_type::of(t.base);
    case type_expr::kind::product:
      return obj_type::product(resolve(*t.first, alg, sig), resolve(*t.second, alg, sig));
    case type_expr::kind::arrow: break;
  }
  obj_type dom = resolve(*t.first, alg, sig);
  obj_type cod = resolve(*t.second, alg, sig);
  const bool flags = alg.unit().is_bool();
  if (flags && t.latent.size() == 1 && (t.latent[0] == "t" || t.latent[0] == "f")) {
    return obj_type::arrow(dom, grade(t.latent[0] == "t"), cod);
  }
  std::vector<effect_token> tokens;
  for (const auto& item : t.latent) {
    auto tok = effect_token::parse(item);
    if (!tok) throw error(error_kind::type, "'" + item + "' is not an annotation of " + alg.name());
    auto declared = sig.lookup(tok->name);
    using nk = signature::name_kind;
    bool ok = declared && ((tok->k == effect_token::kind::implicit_param && *declared == nk::param) ||
                           ((tok->k == effect_token::kind::read || tok->k == effect_token::kind::write) &&
                            *declared == nk::region) ||
                           (tok->k == effect_token::kind::out && *declared == nk::tag));
    if (!ok) throw error(error_kind::scope, "annotation '" + item + "' names no matching declaration");
    tokens.push_back(*tok);
  }
  auto g = alg.from_tokens(tokens);
  if (!g) throw error(error_kind::type, "{" + join_items(t.latent) + "} is not an index of " + alg.name());
  return obj_type::arrow(dom, *g, cod);
}

sem_type sem_of_first_order(const obj_type& t) {
  switch (t.tag()) {
    case obj_type::kind::unit: return sem_type::unit();
    case obj_type::kind::boolean: return sem_type::boolean();
    case obj_type::kind::int4: return sem_type::int_mod(4);
    case obj_type::kind::product:
      return sem_type::product(sem_of_first_order(t.first()), sem_of_first_order(t.second()));
    case obj_type::kind::arrow: break;
  }
  throw error(error_kind::type, "type " + t.show() + " is not first-order");
}

////////////////////////////////////////////////////////////////////////////////
// terms
////////////////////////////////////////////////////////////////////////////////

namespace {

term_ptr make(term::kind k, source_pos p, std::string name, std::vector<term_ptr> kids) {
  auto t = std::make_shared<term>();
  t->k = k;
  t->pos = p;
  t->name = std::move(name);
  t->kids = std::move(kids);
  return t;
}

}  // namespace

term_ptr term::var(std::string x, source_pos p) { return make(kind::var, p, std::move(x), {}); }

term_ptr term::lam(std::string x, type_expr_ptr t, term_ptr body, source_pos p) {
  auto e = std::make_shared<term>(*make(kind::lam, p, std::move(x), {std::move(body)}));
  e->annotation = std::move(t);
  return e;
}

term_ptr term::app(term_ptr f, term_ptr a, source_pos p) { return make(kind::app, p, "", {std::move(f), std::move(a)}); }

term_ptr term::let(std::string x, term_ptr bound, term_ptr body, source_pos p) {
  return make(kind::let, p, std::move(x), {std::move(bound), std::move(body)});
}

term_ptr term::seq(term_ptr first, term_ptr rest, source_pos p) {
  auto e = std::make_shared<term>(*make(kind::let, p, sequence_binder, {std::move(first), std::move(rest)}));
  e->sequence = true;
  return e;
}

term_ptr term::constant(value v, source_pos p) {
  auto e = std::make_shared<term>(*make(kind::constant, p, "", {}));
  e->literal = std::move(v);
  return e;
}

term_ptr term::pair(term_ptr a, term_ptr b, source_pos p) { return make(kind::pair, p, "", {std::move(a), std::move(b)}); }
term_ptr term::fst(term_ptr e, source_pos p) { return make(kind::fst, p, "", {std::move(e)}); }
term_ptr term::snd(term_ptr e, source_pos p) { return make(kind::snd, p, "", {std::move(e)}); }

term_ptr term::cond(term_ptr c, term_ptr t, term_ptr e, source_pos p) {
  return make(kind::cond, p, "", {std::move(c), std::move(t), std::move(e)});
}

term_ptr term::ask(std::string param, source_pos p) { return make(kind::ask, p, std::move(param), {}); }
term_ptr term::read(std::string region, source_pos p) { return make(kind::read, p, std::move(region), {}); }

term_ptr term::write(std::string region, term_ptr e, source_pos p) {
  return make(kind::write, p, std::move(region), {std::move(e)});
}

term_ptr term::out(std::string tag, term_ptr e, source_pos p) { return make(kind::out, p, std::move(tag), {std::move(e)}); }

bool operator==(const term& a, const term& b) {
  if (a.k != b.k || a.name != b.name || a.sequence != b.sequence || a.kids.size() != b.kids.size()) return false;
  if (a.k == term::kind::lam && !(*a.annotation == *b.annotation)) return false;
  if (a.k == term::kind::constant && !equal(a.literal, b.literal)) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!(*a.kids[i] == *b.kids[i])) return false;
  }
  return true;
}

std::string_view to_string(term::kind k) {
  switch (k) {
    case term::kind::var: return "var";
    case term::kind::lam: return "lam";
    case term::kind::app: return "app";
    case term::kind::let: return "let";
    case term::kind::constant: return "const";
    case term::kind::pair: return "pair";
    case term::kind::fst: return "fst";
    case term::kind::snd: return "snd";
    case term::kind::cond: return "if";
    case term::kind::ask: return "ask";
    case term::kind::read: return "read";
    case term::kind::write: return "write";
    case term::kind::out: return "out";
  }
  return "?";
}

////////////////////////////////////////////////////////////////////////////////
// lexer
////////////////////////////////////////////////////////////////////////////////

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {"let",  "in",    "if",     "then",   "else", "fst",  "snd",
                                           "ask",  "read",  "write",  "out",    "param", "region", "tag",
                                           "unit", "true",  "false",  "bool",   "int4"};
  return kw;
}

struct token {
  enum class kind { ident, keyword, number, symbol, end };
  kind k = kind::end;
  std::string text;
  source_pos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<token> lex(const std::string& src) {
  std::vector<token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    source_pos pos{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word = src.substr(i, j - i);
      out.push_back({keywords().contains(word) ? token::kind::keyword : token::kind::ident, word, pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({token::kind::number, src.substr(i, j - i), pos});
      advance(j - i);
      continue;
    }
    if (src.compare(i, 2, "->") == 0) {
      out.push_back({token::kind::symbol, "->", pos});
      advance(2);
      continue;
    }
    if (src.compare(i, 2, "\xCE\xBB") == 0) {  // lambda sign
      out.push_back({token::kind::symbol, "\\", pos});
      advance(2);
      continue;
    }
    if (std::string_view("\\:.;(),={}").find(c) != std::string_view::npos) {
      out.push_back({token::kind::symbol, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw error(error_kind::syntax, std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({token::kind::end, "", {line, col}});
  return out;
}

////////////////////////////////////////////////////////////////////////////////
// parser
////////////////////////////////////////////////////////////////////////////////

class parser {
 public:
  parser(const std::string& src, signature sig) : toks_(lex(src)), sig_(std::move(sig)) {}

  program parse_program() {
    while (peek_keyword("param") || peek_keyword("region") || peek_keyword("tag")) parse_decl();
    term_ptr body = parse_term();
    expect_end();
    return {sig_, body};
  }

  term_ptr parse_closed_term() {
    term_ptr body = parse_term();
    expect_end();
    return body;
  }

  type_expr_ptr parse_whole_type() {
    type_expr_ptr t = parse_type();
    expect_end();
    return t;
  }

 private:
  const token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool peek_symbol(std::string_view s) const { return peek().k == token::kind::symbol && peek().text == s; }
  bool peek_keyword(std::string_view s) const { return peek().k == token::kind::keyword && peek().text == s; }

  [[noreturn]] void fail(const std::string& expected) const {
    const token& t = peek();
    std::string found = t.k == token::kind::end ? "end of input" : "'" + t.text + "'";
    throw error(error_kind::syntax, "expected " + expected + ", found " + found, t.pos);
  }

  void expect_symbol(std::string_view s) {
    if (!peek_symbol(s)) fail("'" + std::string(s) + "'");
    next();
  }

  void expect_keyword(std::string_view s) {
    if (!peek_keyword(s)) fail("'" + std::string(s) + "'");
    next();
  }

  void expect_end() {
    if (peek().k != token::kind::end) fail("end of input");
  }

  std::string expect_name(const std::string& what) {
    if (peek().k != token::kind::ident) fail(what);
    return next().text;
  }

  base_type parse_base() {
    if (peek().k == token::kind::keyword) {
      if (auto b = parse_base_type(peek().text)) {
        next();
        return *b;
      }
    }
    fail("base type (unit, bool or int4)");
  }

  void parse_decl() {
    const token& kw = next();
    auto kind = kw.text == "param"    ? signature::name_kind::param
                : kw.text == "region" ? signature::name_kind::region
                                      : signature::name_kind::tag;
    source_pos at = peek().pos;
    std::string name = expect_name("declared name");
    expect_symbol(":");
    base_type b = parse_base();
    expect_symbol(";");
    try {
      sig_.declare(kind, name, b);
    } catch (const error& e) {
      throw error(e.kind(), e.what(), at);
    }
  }

  // type := prim ("->" "{" items "}" type)?
  type_expr_ptr parse_type() {
    type_expr_ptr dom = parse_type_prim();
    if (!peek_symbol("->")) return dom;
    next();
    expect_symbol("{");
    std::vector<std::string> items;
    if (!peek_symbol("}")) {
      items.push_back(parse_latent_item());
      while (peek_symbol(",")) {
        next();
        items.push_back(parse_latent_item());
      }
    }
    expect_symbol("}");
    return type_expr::make_arrow(dom, std::move(items), parse_type());
  }

  std::string parse_latent_item() {
    const token& t = peek();
    if ((t.k == token::kind::ident && (t.text == "rd" || t.text == "wr" || t.text == "ip")) ||
        (t.k == token::kind::keyword && t.text == "out")) {
      std::string head = next().text;
      return head + " " + expect_name("annotation name");
    }
    if (t.k == token::kind::ident && (t.text == "t" || t.text == "f")) return next().text;
    fail("annotation (rd, wr, ip, out, t or f)");
  }

  type_expr_ptr parse_type_prim() {
    if (peek_symbol("(")) {
      next();
      type_expr_ptr a = parse_type();
      if (peek_symbol(",")) {
        next();
        type_expr_ptr b = parse_type();
        expect_symbol(")");
        return type_expr::make_product(a, b);
      }
      expect_symbol(")");
      return a;
    }
    return type_expr::make_base(parse_base());
  }

  // term := simple (";" term)?
  term_ptr parse_term() {
    source_pos at = peek().pos;
    term_ptr first = parse_simple();
    if (!peek_symbol(";")) return first;
    next();
    return term::seq(first, parse_term(), at);
  }

  term_ptr parse_simple() {
    source_pos at = peek().pos;
    if (peek_symbol("\\")) {
      next();
      std::string x = expect_name("parameter name");
      expect_symbol(":");
      type_expr_ptr t = parse_type();
      expect_symbol(".");
      bound_.push_back(x);
      term_ptr body = parse_term();
      bound_.pop_back();
      return term::lam(x, t, body, at);
    }
    if (peek_keyword("let")) {
      next();
      std::string x = expect_name("binder name");
      expect_symbol("=");
      term_ptr bound = parse_term();
      expect_keyword("in");
      bound_.push_back(x);
      term_ptr body = parse_term();
      bound_.pop_back();
      return term::let(x, bound, body, at);
    }
    if (peek_keyword("if")) {
      next();
      term_ptr c = parse_term();
      expect_keyword("then");
      term_ptr t = parse_term();
      expect_keyword("else");
      term_ptr e = parse_term();
      return term::cond(c, t, e, at);
    }
    return parse_app();
  }

  bool atom_starts() const {
    const token& t = peek();
    switch (t.k) {
      case token::kind::ident:
      case token::kind::number: return true;
      case token::kind::symbol: return t.text == "(";
      case token::kind::keyword:
        return t.text == "unit" || t.text == "true" || t.text == "false" || t.text == "fst" || t.text == "snd" ||
               t.text == "ask" || t.text == "read" || t.text == "write" || t.text == "out";
      case token::kind::end: return false;
    }
    return false;
  }

  term_ptr parse_app() {
    if (!atom_starts()) fail("term");
    term_ptr f = parse_atom();
    while (atom_starts()) {
      source_pos at = f->pos;
      f = term::app(f, parse_atom(), at);
    }
    return f;
  }

  std::string expect_declared(signature::name_kind want, const char* what) {
    source_pos at = peek().pos;
    std::string name = expect_name(std::string(what) + " name");
    if (sig_.lookup(name) != want) throw error(error_kind::scope, "'" + name + "' is not a declared " + what, at);
    return name;
  }

  term_ptr parse_atom() {
    const token t = peek();
    source_pos at = t.pos;
    if (t.k == token::kind::ident) {
      next();
      if (t.text == sequence_binder || std::find(bound_.rbegin(), bound_.rend(), t.text) == bound_.rend()) {
        throw error(error_kind::scope, "unbound variable '" + t.text + "'", at);
      }
      return term::var(t.text, at);
    }
    if (t.k == token::kind::number) {
      next();
      long k = 0;
      for (char c : t.text) k = (k * 10 + (c - '0')) % 4;
      return term::constant(value::int_mod(k), at);
    }
    if (t.k == token::kind::symbol && t.text == "(") {
      next();
      term_ptr a = parse_term();
      if (peek_symbol(",")) {
        next();
        term_ptr b = parse_term();
        expect_symbol(")");
        return term::pair(a, b, at);
      }
      expect_symbol(")");
      return a;
    }
    next();
    const std::string& kw = t.text;
    if (kw == "unit") return term::constant(value::unit(), at);
    if (kw == "true") return term::constant(value::boolean(true), at);
    if (kw == "false") return term::constant(value::boolean(false), at);
    if (kw == "fst") return term::fst(parse_atom_arg(), at);
    if (kw == "snd") return term::snd(parse_atom_arg(), at);
    if (kw == "ask") return term::ask(expect_declared(signature::name_kind::param, "parameter"), at);
    if (kw == "read") return term::read(expect_declared(signature::name_kind::region, "region"), at);
    if (kw == "write") {
      std::string r = expect_declared(signature::name_kind::region, "region");
      return term::write(r, parse_atom_arg(), at);
    }
    std::string tag = expect_declared(signature::name_kind::tag, "tag");
    return term::out(tag, parse_atom_arg(), at);
  }

  term_ptr parse_atom_arg() {
    if (!atom_starts()) fail("argument");
    return parse_atom();
  }

  std::vector<token> toks_;
  std::size_t pos_ = 0;
  signature sig_;
  std::vector<std::string> bound_;
};

}  // namespace

program parse(const std::string& source) { return parser(source, {}).parse_program(); }

term_ptr parse_term(const std::string& source, const signature& sig) {
  return parser(source, sig).parse_closed_term();
}

type_expr_ptr parse_type(const std::string& source) { return parser(source, {}).parse_whole_type(); }

////////////////////////////////////////////////////////////////////////////////
// pretty printer
////////////////////////////////////////////////////////////////////////////////

namespace {

// 0: binding forms (extend to the right), 1: operand of ";", 2: application,
// 3: keyword atom (fst, ask, write, ...), 4: atom. Arguments need 4, so
// keyword atoms are bracketed there for readability.
int precedence(const term& e) {
  switch (e.k) {
    case term::kind::lam:
    case term::kind::let:
    case term::kind::cond: return 0;
    case term::kind::app: return 2;
    case term::kind::var:
    case term::kind::constant:
    case term::kind::pair: return 4;
    default: return 3;
  }
}

std::string literal_text(const value& v) {
  switch (v.tag()) {
    case value::kind::unit: return "unit";
    case value::kind::boolean: return v.as_bool() ? "true" : "false";
    case value::kind::int_mod: return std::to_string(v.residue());
    default: throw error(error_kind::type, "constant " + show(v) + " has no literal syntax");
  }
}

void print(const term& e, int min_prec, std::ostringstream& os) {
  if (precedence(e) < min_prec) {
    os << '(';
    print(e, 0, os);
    os << ')';
    return;
  }
  using k = term::kind;
  switch (e.k) {
    case k::var: os << e.name; break;
    case k::constant: os << literal_text(e.literal); break;
    case k::ask: os << "ask " << e.name; break;
    case k::read: os << "read " << e.name; break;
    case k::pair:
      os << '(';
      print(e.child(0), 0, os);
      os << ", ";
      print(e.child(1), 0, os);
      os << ')';
      break;
    case k::fst: os << "fst "; print(e.child(0), 4, os); break;
    case k::snd: os << "snd "; print(e.child(0), 4, os); break;
    case k::write: os << "write " << e.name << ' '; print(e.child(0), 4, os); break;
    case k::out: os << "out " << e.name << ' '; print(e.child(0), 4, os); break;
    case k::app:
      print(e.child(0), 2, os);
      os << ' ';
      print(e.child(1), 4, os);
      break;
    case k::lam:
      os << '\\' << e.name << ':' << e.annotation->show() << ". ";
      print(e.child(0), 0, os);
      break;
    case k::let:
      if (e.sequence) {
        print(e.child(0), 1, os);
        os << "; ";
      } else {
        os << "let " << e.name << " = ";
        print(e.child(0), 0, os);
        os << " in ";
      }
      print(e.child(1), 0, os);
      break;
    case k::cond:
      os << "if ";
      print(e.child(0), 0, os);
      os << " then ";
      print(e.child(1), 0, os);
      os << " else ";
      print(e.child(2), 0, os);
      break;
  }
}

}  // namespace

std::string pretty(const term& e) {
  std::ostringstream os;
  print(e, 0, os);
  return os.str();
}

std::string pretty(const program& p) {
  std::ostringstream os;
  auto decls = [&](const char* kw, const std::map<std::string, base_type>& names) {
    for (const auto& [name, b] : names) os << kw << ' ' << name << " : " << to_string(b) << ";\n";
  };
  decls("param", p.sig.params);
  decls("region", p.sig.regions);
  decls("tag", p.sig.tags);
  os << pretty(*p.body);
  return os.str();
}

////////////////////////////////////////////////////////////////////////////////
// binding structure
////////////////////////////////////////////////////////////////////////////////

namespace {

void collect_free(const term& e, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (e.k) {
    case term::kind::var:
      if (!bound.contains(e.name)) out.insert(e.name);
      return;
    case term::kind::lam: {
      bool fresh = bound.insert(e.name).second;
      collect_free(e.child(0), bound, out);
      if (fresh) bound.erase(e.name);
      return;
    }
    case term::kind::let: {
      collect_free(e.child(0), bound, out);
      bool fresh = bound.insert(e.name).second;
      collect_free(e.child(1), bound, out);
      if (fresh) bound.erase(e.name);
      return;
    }
    default:
      for (const auto& kid : e.kids) collect_free(*kid, bound, out);
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.contains(candidate)) return candidate;
  }
}

term_ptr with_kids(const term& e, std::vector<term_ptr> kids) {
  auto copy = std::make_shared<term>(e);
  copy->kids = std::move(kids);
  return copy;
}

term_ptr rename_bound(const term& binder, const std::string& to, const term_ptr& body_or_null, std::size_t body_index) {
  auto copy = std::make_shared<term>(binder);
  copy->name = to;
  copy->kids[body_index] = body_or_null;
  return copy;
}

}  // namespace

std::set<std::string> free_vars(const term& e) {
  std::set<std::string> bound, out;
  collect_free(e, bound, out);
  return out;
}

term_ptr substitute(const term_ptr& e, const std::string& x, const term_ptr& v) {
  switch (e->k) {
    case term::kind::var: return e->name == x ? v : e;
    case term::kind::lam:
    case term::kind::let: {
      const std::size_t body = e->k == term::kind::lam ? 0 : 1;
      std::vector<term_ptr> kids = e->kids;
      if (e->k == term::kind::let) kids[0] = substitute(kids[0], x, v);
      if (e->name == x) return with_kids(*e, kids);
      auto fv = free_vars(*v);
      if (fv.contains(e->name) && free_vars(*kids[body]).contains(x)) {
        std::set<std::string> avoid = fv;
        auto in_body = free_vars(*kids[body]);
        avoid.insert(in_body.begin(), in_body.end());
        avoid.insert(x);
        std::string renamed = fresh_name(e->name, avoid);
        term_ptr body_renamed = substitute(kids[body], e->name, term::var(renamed));
        auto tmp = with_kids(*e, kids);
        return rename_bound(*tmp, renamed, substitute(body_renamed, x, v), body);
      }
      kids[body] = substitute(kids[body], x, v);
      return with_kids(*e, kids);
    }
    default: {
      if (e->kids.empty()) return e;
      std::vector<term_ptr> kids;
      kids.reserve(e->kids.size());
      for (const auto& kid : e->kids) kids.push_back(substitute(kid, x, v));
      return with_kids(*e, std::move(kids));
    }
  }
}

std::map<const term*, int> number_lets(const term& e) {
  std::map<const term*, int> ids;
  std::vector<const term*> stack{&e};
  while (!stack.empty()) {
    const term* t = stack.back();
    stack.pop_back();
    if (t->k == term::kind::let) ids.emplace(t, static_cast<int>(ids.size()));
    for (auto it = t->kids.rbegin(); it != t->kids.rend(); ++it) stack.push_back(it->get());
  }
  return ids;
}

std::set<effect_token> primitives_used(const term& e) {
  std::set<effect_token> out;
  std::vector<const term*> stack{&e};
  while (!stack.empty()) {
    const term* t = stack.back();
    stack.pop_back();
    switch (t->k) {
      case term::kind::ask: out.insert(effect_token::ip(t->name)); break;
      case term::kind::read: out.insert(effect_token::rd(t->name)); break;
      case term::kind::write: out.insert(effect_token::wr(t->name)); break;
      case term::kind::out: out.insert(effect_token::out(t->name)); break;
      default: break;
    }
    for (const auto& kid : t->kids) stack.push_back(kid.get());
  }
  return out;
}

bool is_value(const term& e) {
  switch (e.k) {
    case term::kind::var:
    case term::kind::lam:
    case term::kind::constant: return true;
    case term::kind::pair: return is_value(e.child(0)) && is_value(e.child(1));
    default: return false;
  }
}

}  // namespace gradeff
