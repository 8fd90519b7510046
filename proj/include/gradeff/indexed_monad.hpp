#pragma once

// Indexed monads: a lax monoidal functor T from an index monoid into
// endofunctors on the semantic universe. Computations of type T F A are
// ordinary `value`s whose shape is given by carrier_of(F, A).

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gradeff/effect_algebra.hpp"
#include "gradeff/signature.hpp"
#include "gradeff/value.hpp"

namespace gradeff {

// Inputs a closed computation is run against.
struct run_inputs {
  std::map<std::string, value> env;    // implicit parameters
  std::map<std::string, value> store;  // memory regions
};

struct observation {
  value result;
  std::map<std::string, value> writes;
  std::vector<std::pair<std::string, value>> trace;
};

class indexed_monad {
 public:
  virtual ~indexed_monad() = default;

  virtual std::string name() const = 0;
  virtual const effect_algebra& algebra() const = 0;

  // Shape of T F A.
  virtual sem_type carrier_of(const grade& f, const sem_type& a) const = 0;

  // T F f
  virtual value fmap(const grade& f, const value::mapping& fn, const value& t) const = 0;
  // eta_1 : A -> T 1 A
  virtual value eta(const value& a) const = 0;
  // mu_{F,G} : T F (T G A) -> T (F.G) A
  virtual value mu(const grade& f, const grade& g, const value& t) const = 0;
  // iota_{X,Y} : T X A -> T Y A, the morphism action of T along X <= Y
  virtual bool iota_defined(const grade& x, const grade& y) const;
  virtual value iota(const grade& x, const grade& y, const value& t) const = 0;
  // tau_F : A x T F B -> T F (A x B)
  virtual value strength(const grade& f, const value& a, const value& t) const = 0;

  // The denotation of a primitive: a computation at grade primitive(tok).
  // `arg` is the written/emitted value for wr and out, ignored otherwise.
  virtual value perform(const effect_token& tok, const value& arg) const;

  // Runs a closed computation of grade F.
  virtual observation observe(const grade& f, const value& t, const run_inputs& in) const = 0;
};

using monad_ptr = std::shared_ptr<const indexed_monad>;

// T F A x B -> T F (A x B), from strength and the product symmetry.
value costrength(const indexed_monad& m, const grade& f, const value& t, const value& b);

////////////////////////////////////////////////////////////////////////////////
// instances
////////////////////////////////////////////////////////////////////////////////

// T X A = env(X) => A over (P(params), union, {}).
class reader_monad : public indexed_monad {
 public:
  explicit reader_monad(signature sig);

  std::string name() const override { return "reader"; }
  const effect_algebra& algebra() const override { return alg_; }
  sem_type carrier_of(const grade& f, const sem_type& a) const override;
  value fmap(const grade& f, const value::mapping& fn, const value& t) const override;
  value eta(const value& a) const override;
  value mu(const grade& f, const grade& g, const value& t) const override;
  value iota(const grade& x, const grade& y, const value& t) const override;
  value strength(const grade& f, const value& a, const value& t) const override;
  value perform(const effect_token& tok, const value& arg) const override;
  observation observe(const grade& f, const value& t, const run_inputs& in) const override;

  sem_type env_type(const grade& f) const;

 protected:
  signature sig_;
  effect_algebra alg_;
};

// T F A = store(Reads F) => A x writes(Writes F).
//
// In partial mode performed writes are a partial map over Writes F, so that
// iota along write-set inclusion exists. In exact mode every declared write
// is performed (T {wr r} A = A x tau) and iota is only defined when the write
// sets agree.
class memory_monad : public indexed_monad {
 public:
  enum class write_mode { partial, exact };

  explicit memory_monad(signature sig, write_mode mode = write_mode::partial);

  std::string name() const override { return mode_ == write_mode::partial ? "memory" : "memory-exact"; }
  const effect_algebra& algebra() const override { return alg_; }
  sem_type carrier_of(const grade& f, const sem_type& a) const override;
  value fmap(const grade& f, const value::mapping& fn, const value& t) const override;
  value eta(const value& a) const override;
  value mu(const grade& f, const grade& g, const value& t) const override;
  bool iota_defined(const grade& x, const grade& y) const override;
  value iota(const grade& x, const grade& y, const value& t) const override;
  value strength(const grade& f, const value& a, const value& t) const override;
  value perform(const effect_token& tok, const value& arg) const override;
  observation observe(const grade& f, const value& t, const run_inputs& in) const override;

  write_mode mode() const { return mode_; }
  sem_type store_type(const grade& f) const;
  sem_type writes_type(const grade& f) const;

 protected:
  // Writes of a sequenced pair of computations; later writes win.
  virtual value merge_writes(const value& first, const value& second) const;
  // The store the second computation of mu observes: the input store on its
  // read set, overridden by the first computation's writes.
  virtual value sequenced_store(const value& store, const grade& second, const value& first_writes) const;

  std::map<std::string, sem_type> reads_of(const grade& f) const;
  std::map<std::string, sem_type> writes_of(const grade& f) const;

  signature sig_;
  write_mode mode_;
  effect_algebra alg_;
};

// T F A = A x (values emitted at the tags of F, in order).
class trace_monad : public indexed_monad {
 public:
  trace_monad(signature sig, std::size_t max_len);

  std::string name() const override { return "trace"; }
  const effect_algebra& algebra() const override { return alg_; }
  sem_type carrier_of(const grade& f, const sem_type& a) const override;
  value fmap(const grade& f, const value::mapping& fn, const value& t) const override;
  value eta(const value& a) const override;
  value mu(const grade& f, const grade& g, const value& t) const override;
  bool iota_defined(const grade& x, const grade& y) const override;
  value iota(const grade& x, const grade& y, const value& t) const override;
  value strength(const grade& f, const value& a, const value& t) const override;
  value perform(const effect_token& tok, const value& arg) const override;
  observation observe(const grade& f, const value& t, const run_inputs& in) const override;

 protected:
  signature sig_;
  effect_algebra alg_;
};

// The single-index collapse: T 1 A = A, an ordinary (identity) monad.
class identity_monad : public indexed_monad {
 public:
  identity_monad();

  std::string name() const override { return "identity"; }
  const effect_algebra& algebra() const override { return alg_; }
  sem_type carrier_of(const grade& f, const sem_type& a) const override;
  value fmap(const grade& f, const value::mapping& fn, const value& t) const override;
  value eta(const value& a) const override;
  value mu(const grade& f, const grade& g, const value& t) const override;
  value iota(const grade& x, const grade& y, const value& t) const override;
  value strength(const grade& f, const value& a, const value& t) const override;
  observation observe(const grade& f, const value& t, const run_inputs& in) const override;

 private:
  effect_algebra alg_;
};

inline constexpr std::size_t default_trace_bound = 8;

monad_ptr make_reader_instance(const signature& sig);
// Checks that `alg` is the powerset over the signature's parameters.
monad_ptr make_reader_instance(const signature& sig, const effect_algebra& alg);
monad_ptr make_memory_instance(const signature& sig,
                               memory_monad::write_mode mode = memory_monad::write_mode::partial);
monad_ptr make_trace_instance(const signature& sig, std::size_t max_len = default_trace_bound);
monad_ptr identity_collapse_instance();

}  // namespace gradeff
