#include "gradeff/coeffect_inference.hpp"

#include <algorithm>

namespace gradeff {

namespace {

[[noreturn]] void fail(error_kind k, const std::string& msg, const term& at) { throw error(k, msg, at.pos); }

type_context extend(const type_context& ctx, const std::string& x, const obj_type& t) {
  type_context out = ctx;
  out.insert_or_assign(x, t);
  return out;
}

struct split {
  bool immediate;
  bool latent;
};

split split_demand(bool r, lam_split policy) {
  return policy == lam_split::duplicate ? split{r, r} : split{true, r};
}

class inferrer {
 public:
  inferrer(const signature& sig, lam_split policy, const term& root)
      : sig_(sig), policy_(policy), alg_(bool_conj_algebra()), let_ids_(number_lets(root)) {}

  std::vector<liveness_entry> liveness;

  coeffect_derivation_ptr infer(const type_context& ctx, const term_ptr& ep) {
    const term& e = *ep;
    auto d = std::make_shared<coeffect_derivation>();
    d->rule = std::string(to_string(e.k));
    d->subject = ep;
    using k = term::kind;
    switch (e.k) {
      case k::var: {
        auto it = ctx.find(e.name);
        if (it == ctx.end()) fail(error_kind::scope, "unbound variable '" + e.name + "'", e);
        d->type = it->second;
        d->demand = true;
        break;
      }
      case k::constant:
        d->type = literal_type(e.literal);
        d->demand = false;
        break;
      case k::lam: {
        obj_type dom = resolve_at(e);
        auto body = infer(extend(ctx, e.name, dom), e.kids[0]);
        split s = split_demand(body->demand, policy_);
        d->type = obj_type::arrow(dom, grade(s.latent), body->type);
        d->demand = s.immediate;
        d->immediate = s.immediate;
        d->latent = s.latent;
        d->children = {body};
        break;
      }
      case k::app: {
        auto f = infer(ctx, e.kids[0]);
        auto a = infer(ctx, e.kids[1]);
        const obj_type& ft = f->type;
        if (ft.tag() != obj_type::kind::arrow) fail(error_kind::type, "applying a non-function of type " + ft.show(), e);
        if (!is_co_subtype(a->type, ft.domain())) {
          fail(error_kind::type, "argument of type " + a->type.show() + " where " + ft.domain().show() + " is expected",
               e);
        }
        if (!(a->type == ft.domain())) d->coercions.push_back({"argument", std::nullopt, std::make_pair(a->type, ft.domain())});
        d->type = ft.codomain();
        d->demand = f->demand || (ft.latent().flag() && a->demand);
        d->children = {f, a};
        break;
      }
      case k::let: {
        // let x = e1 in e2 is (\x. e2) e1.
        int id = let_ids_.at(&e);
        auto bound = infer(ctx, e.kids[0]);
        auto body = infer(extend(ctx, e.name, bound->type), e.kids[1]);
        split s = split_demand(body->demand, policy_);
        d->type = body->type;
        d->demand = s.immediate || (s.latent && bound->demand);
        d->immediate = s.immediate;
        d->latent = s.latent;
        d->children = {bound, body};
        liveness.push_back({id, e.name, e.pos, s.latent});
        break;
      }
      case k::pair: {
        auto a = infer(ctx, e.kids[0]);
        auto b = infer(ctx, e.kids[1]);
        d->type = obj_type::product(a->type, b->type);
        d->demand = a->demand || b->demand;
        d->children = {a, b};
        break;
      }
      case k::fst:
      case k::snd: {
        auto p = infer(ctx, e.kids[0]);
        if (p->type.tag() != obj_type::kind::product) {
          fail(error_kind::type, "projection from non-pair type " + p->type.show(), e);
        }
        d->type = e.k == k::fst ? p->type.first() : p->type.second();
        d->demand = p->demand;
        d->children = {p};
        break;
      }
      case k::cond: {
        auto c = infer(ctx, e.kids[0]);
        auto t = infer(ctx, e.kids[1]);
        auto f = infer(ctx, e.kids[2]);
        if (!(c->type == obj_type::boolean())) {
          fail(error_kind::type, "condition has type " + c->type.show() + ", expected bool", e);
        }
        try {
          d->type = join_co_types(t->type, f->type);
        } catch (const error& err) {
          fail(err.kind(), err.what(), e);
        }
        if (!(t->type == d->type)) d->coercions.push_back({"then", std::nullopt, std::make_pair(t->type, d->type)});
        if (!(f->type == d->type)) d->coercions.push_back({"else", std::nullopt, std::make_pair(f->type, d->type)});
        d->demand = c->demand || t->demand || f->demand;
        d->children = {c, t, f};
        break;
      }
      case k::ask:
      case k::read:
      case k::write:
      case k::out:
        fail(error_kind::unsupported_primitive,
             "effect primitive '" + std::string(to_string(e.k)) + " " + e.name + "' has no coeffect semantics", e);
    }
    return d;
  }

 private:
  obj_type resolve_at(const term& e) {
    try {
      return resolve(*e.annotation, alg_, sig_);
    } catch (const error& err) {
      if (err.pos().known()) throw;
      throw error(err.kind(), err.what(), e.pos);
    }
  }

  const signature& sig_;
  lam_split policy_;
  effect_algebra alg_;
  std::map<const term*, int> let_ids_;
};

}  // namespace

bool is_co_subtype(const obj_type& a, const obj_type& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case obj_type::kind::product: return is_co_subtype(a.first(), b.first()) && is_co_subtype(a.second(), b.second());
    case obj_type::kind::arrow:
      return a.domain() == b.domain() && (!a.latent().flag() || b.latent().flag()) &&
             is_co_subtype(a.codomain(), b.codomain());
    default: return true;
  }
}

obj_type join_co_types(const obj_type& a, const obj_type& b) {
  auto mismatch = [&] { return error(error_kind::type, "branches have types " + a.show() + " and " + b.show()); };
  if (a.tag() != b.tag()) throw mismatch();
  switch (a.tag()) {
    case obj_type::kind::product:
      return obj_type::product(join_co_types(a.first(), b.first()), join_co_types(a.second(), b.second()));
    case obj_type::kind::arrow:
      if (!(a.domain() == b.domain())) throw mismatch();
      return obj_type::arrow(a.domain(), grade(a.latent().flag() || b.latent().flag()),
                             join_co_types(a.codomain(), b.codomain()));
    default: return a;
  }
}

coeffect_judgment infer_coeffect(const signature& sig, const type_context& ctx, const term_ptr& e,
                                 lam_split policy) {
  inferrer inf(sig, policy, *e);
  auto root = inf.infer(ctx, e);
  std::sort(inf.liveness.begin(), inf.liveness.end(),
            [](const liveness_entry& a, const liveness_entry& b) { return a.id < b.id; });
  return {ctx, root, std::move(inf.liveness)};
}

}  // namespace gradeff
