#pragma once

// Indexed comonads: a colax monoidal functor D from an index monoid into
// endofunctors, with a zipping operation that merges two differently indexed
// contexts.

#include <memory>
#include <string>

#include "gradeff/effect_algebra.hpp"
#include "gradeff/value.hpp"

namespace gradeff {

class indexed_comonad {
 public:
  virtual ~indexed_comonad() = default;

  virtual std::string name() const = 0;
  virtual const effect_algebra& algebra() const = 0;

  virtual sem_type carrier_of(const grade& f, const sem_type& a) const = 0;

  virtual value fmap(const grade& f, const value::mapping& fn, const value& d) const = 0;
  // eps_1 : D 1 A -> A
  virtual value epsilon(const value& d) const = 0;
  // delta_{F,G} : D (F.G) A -> D F (D G A)
  virtual value delta(const grade& f, const grade& g, const value& d) const = 0;

  // m_{F,G} : D F A x D G B -> D (F v G) (A x B)
  virtual grade zip_index(const grade& f, const grade& g) const = 0;
  virtual value mzip(const grade& f, const grade& g, const value& a, const value& b) const = 0;

  // Contraction D (F + G) A -> D F A x D G A, used to hand one context to two
  // subterms. share_index is the least index both sides can be split from.
  virtual grade share_index(const grade& f, const grade& g) const = 0;
  virtual value share(const grade& f, const grade& g, const value& d) const = 0;

  // D X A -> D Y A for Y below X in the demand order (forgetting context).
  virtual bool weaken_defined(const grade& from, const grade& to) const = 0;
  virtual value weaken(const grade& from, const grade& to, const value& d) const = 0;
};

using comonad_ptr = std::shared_ptr<const indexed_comonad>;

// D t A = A, D f A = 1, over ({f, t}, and, t). Zip and demand order:
// F v G = F and G, share_index = F or G, f below t.
class partiality_comonad : public indexed_comonad {
 public:
  partiality_comonad();

  std::string name() const override { return "partiality"; }
  const effect_algebra& algebra() const override { return alg_; }
  sem_type carrier_of(const grade& f, const sem_type& a) const override;
  value fmap(const grade& f, const value::mapping& fn, const value& d) const override;
  value epsilon(const value& d) const override;
  value delta(const grade& f, const grade& g, const value& d) const override;
  grade zip_index(const grade& f, const grade& g) const override;
  value mzip(const grade& f, const grade& g, const value& a, const value& b) const override;
  grade share_index(const grade& f, const grade& g) const override;
  value share(const grade& f, const grade& g, const value& d) const override;
  bool weaken_defined(const grade& from, const grade& to) const override;
  value weaken(const grade& from, const grade& to, const value& d) const override;

 protected:
  // Throws index_mismatch unless d has the shape D F _ demands.
  static void expect_shape(const grade& f, const value& d, const char* op);
  static bool live(const grade& f);

  effect_algebra alg_;
};

comonad_ptr make_partiality_instance();

}  // namespace gradeff
