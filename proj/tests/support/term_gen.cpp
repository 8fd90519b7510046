#include "term_gen.hpp"

#include <functional>
#include <vector>

namespace gradeff::testing {

signature test_signature() {
  signature sig;
  sig.declare(signature::name_kind::param, "p", base_type::int4);
  sig.declare(signature::name_kind::param, "q", base_type::boolean);
  sig.declare(signature::name_kind::region, "r", base_type::int4);
  sig.declare(signature::name_kind::region, "s", base_type::boolean);
  sig.declare(signature::name_kind::tag, "a", base_type::boolean);
  sig.declare(signature::name_kind::tag, "b", base_type::int4);
  return sig;
}

namespace {

const grade placeholder{token_set{}};

obj_type obj_of(base_type b) {
  switch (b) {
    case base_type::unit: return obj_type::unit();
    case base_type::boolean: return obj_type::boolean();
    case base_type::int4: return obj_type::int4();
  }
  return obj_type::unit();
}

type_context extend(const type_context& ctx, const std::string& x, const obj_type& t) {
  type_context out = ctx;
  out.insert_or_assign(x, t);
  return out;
}

}  // namespace

bool same_shape(const obj_type& a, const obj_type& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case obj_type::kind::product:
    case obj_type::kind::arrow: return same_shape(a.first(), b.first()) && same_shape(a.second(), b.second());
    default: return true;
  }
}

std::optional<effect_judgment> try_infer(const signature& sig, const effect_algebra& alg, const type_context& ctx,
                                         const term_ptr& e) {
  try {
    return infer_effect(sig, alg, ctx, e);
  } catch (const error&) {
    return std::nullopt;
  }
}

term_generator::term_generator(signature sig, std::uint64_t seed) : sig_(std::move(sig)), rng_(seed) {}

bool term_generator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

int term_generator::below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

std::string term_generator::fresh() { return "x" + std::to_string(counter_++); }

obj_type term_generator::shape(int depth, bool first_order) {
  int pick = below(depth > 0 ? (first_order ? 4 : 6) : 3);
  switch (pick) {
    case 0: return obj_type::int4();
    case 1: return obj_type::boolean();
    case 2: return coin(0.5) ? obj_type::unit() : obj_type::int4();
    case 3: return obj_type::product(shape(depth - 1, true), shape(depth - 1, true));
    default: return obj_type::arrow(shape(0, true), placeholder, shape(depth - 1, false));
  }
}

term_ptr term_generator::literal_of(const obj_type& s) {
  switch (s.tag()) {
    case obj_type::kind::unit: return term::constant(value::unit());
    case obj_type::kind::boolean: return term::constant(value::boolean(coin(0.5)));
    case obj_type::kind::int4: return term::constant(value::int_mod(below(4)));
    case obj_type::kind::product: return term::pair(literal_of(s.first()), literal_of(s.second()));
    case obj_type::kind::arrow: break;
  }
  throw error(error_kind::type, "no literal of function shape");
}

type_expr_ptr term_generator::annotation_for(const obj_type& dom, const obj_type& cod, const gen_options& opt) {
  std::vector<std::string> items;
  switch (opt.primitives) {
    case prims::params:
      for (const auto& [p, _] : sig_.params) {
        if (coin(0.5)) items.push_back("ip " + p);
      }
      break;
    case prims::memory:
      for (const auto& [r, _] : sig_.regions) {
        if (coin(0.5)) items.push_back("rd " + r);
        if (coin(0.5)) items.push_back("wr " + r);
      }
      break;
    case prims::trace: {
      int n = below(3);
      auto tags = sig_.tag_names();
      std::vector<std::string> names(tags.begin(), tags.end());
      for (int i = 0; i < n; ++i) items.push_back("out " + names[below(static_cast<int>(names.size()))]);
      break;
    }
    case prims::none: break;
  }
  return type_expr::make_arrow(dom.to_expr(), items, cod.to_expr());
}

std::optional<term_ptr> term_generator::primitive_of(const type_context& ctx, const obj_type& s,
                                                     const gen_options& opt, int depth) {
  std::vector<std::function<term_ptr()>> options;
  auto payload = [&](const obj_type& t) { return depth > 0 ? gen(ctx, t, opt, depth - 1) : literal_of(t); };
  switch (opt.primitives) {
    case prims::params:
      for (const auto& [p, b] : sig_.params) {
        if (same_shape(obj_of(b), s)) options.push_back([p] { return term::ask(p); });
      }
      break;
    case prims::memory:
      for (const auto& [r, b] : sig_.regions) {
        if (same_shape(obj_of(b), s)) options.push_back([r] { return term::read(r); });
        if (s.tag() == obj_type::kind::unit) {
          options.push_back([&, r, b] { return term::write(r, payload(obj_of(b))); });
        }
      }
      break;
    case prims::trace:
      if (s.tag() == obj_type::kind::unit) {
        for (const auto& [t, b] : sig_.tags) {
          options.push_back([&, t, b] { return term::out(t, payload(obj_of(b))); });
        }
      }
      break;
    case prims::none: break;
  }
  if (options.empty()) return std::nullopt;
  return options[below(static_cast<int>(options.size()))]();
}

term_ptr term_generator::term_of(const type_context& ctx, const obj_type& s, const gen_options& opt) {
  return gen(ctx, s, opt, opt.max_depth);
}

term_ptr term_generator::closed(const gen_options& opt) {
  return term_of({}, shape(2, false), opt);
}

term_ptr term_generator::gen(const type_context& ctx, const obj_type& s, const gen_options& opt, int depth) {
  std::vector<std::string> vars;
  if (!opt.no_vars) {
    for (const auto& [x, t] : ctx) {
      if (same_shape(t, s)) vars.push_back(x);
    }
  }
  auto binder = [&] {
    if (!ctx.empty() && coin(0.1)) {
      auto it = ctx.begin();
      std::advance(it, below(static_cast<int>(ctx.size())));
      return it->first;  // shadowing
    }
    return fresh();
  };
  auto lambda = [&](int d) {
    std::string x = binder();
    return term::lam(x, s.domain().to_expr(), gen(extend(ctx, x, s.domain()), s.codomain(), opt, d));
  };

  if (depth <= 0) {
    std::vector<std::function<term_ptr()>> leaves;
    for (const auto& x : vars) leaves.push_back([x] { return term::var(x); });
    if (s.tag() == obj_type::kind::arrow) leaves.push_back([&] { return lambda(0); });
    if (s.is_first_order()) leaves.push_back([&] { return literal_of(s); });
    if (s.tag() == obj_type::kind::product) {
      leaves.push_back([&] { return term::pair(gen(ctx, s.first(), opt, 0), gen(ctx, s.second(), opt, 0)); });
    }
    if (coin(0.5)) {
      if (auto p = primitive_of(ctx, s, opt, 0)) return *p;
    }
    return leaves[below(static_cast<int>(leaves.size()))]();
  }

  std::vector<std::pair<int, std::function<term_ptr()>>> choices;
  for (const auto& x : vars) choices.push_back({2, [x] { return term::var(x); }});
  if (s.tag() == obj_type::kind::arrow) choices.push_back({4, [&] { return lambda(depth - 1); }});
  if (s.is_first_order()) choices.push_back({1, [&] { return literal_of(s); }});
  if (s.tag() == obj_type::kind::product) {
    choices.push_back({2, [&] { return term::pair(gen(ctx, s.first(), opt, depth - 1), gen(ctx, s.second(), opt, depth - 1)); }});
  }
  choices.push_back({3, [&] {
                       obj_type dom = shape(0, true);
                       if (opt.higher_order_params && coin(0.25)) {
                         obj_type fs = obj_type::arrow(dom, placeholder, shape(0, true));
                         std::string f = binder();
                         type_expr_ptr ann = annotation_for(fs.domain(), fs.codomain(), opt);
                         term_ptr body = gen(extend(ctx, f, fs), s, opt, depth - 1);
                         return term::app(term::lam(f, ann, body), gen(ctx, fs, opt, depth - 1));
                       }
                       return term::app(gen(ctx, obj_type::arrow(dom, placeholder, s), opt, depth - 1),
                                        gen(ctx, dom, opt, depth - 1));
                     }});
  choices.push_back({3, [&] {
                       obj_type bs = shape(1, false);
                       term_ptr bound = gen(ctx, bs, opt, depth - 1);
                       std::string x = binder();
                       return term::let(x, bound, gen(extend(ctx, x, bs), s, opt, depth - 1));
                     }});
  if (opt.primitives != prims::none) {
    choices.push_back({2, [&] {
                         term_ptr first = gen(ctx, obj_type::unit(), opt, depth - 1);
                         return term::seq(first, gen(ctx, s, opt, depth - 1));
                       }});
    choices.push_back({3, [&] {
                         auto p = primitive_of(ctx, s, opt, depth);
                         return p ? *p : gen(ctx, s, opt, depth - 1);
                       }});
  }
  choices.push_back({1, [&] {
                       bool left = coin(0.5);
                       obj_type other = shape(0, true);
                       obj_type ps = left ? obj_type::product(s, other) : obj_type::product(other, s);
                       term_ptr p = gen(ctx, ps, opt, depth - 1);
                       return left ? term::fst(p) : term::snd(p);
                     }});
  if (opt.conditionals) {
    choices.push_back({2, [&] {
                         term_ptr c = gen(ctx, obj_type::boolean(), opt, depth - 1);
                         return term::cond(c, gen(ctx, s, opt, depth - 1), gen(ctx, s, opt, depth - 1));
                       }});
  }

  int total = 0;
  for (const auto& c : choices) total += c.first;
  int pick = below(total);
  for (const auto& c : choices) {
    if (pick < c.first) return c.second();
    pick -= c.first;
  }
  return choices.back().second();
}

}  // namespace gradeff::testing
