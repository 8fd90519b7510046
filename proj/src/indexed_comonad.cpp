#include "gradeff/indexed_comonad.hpp"

#include "gradeff/error.hpp"

namespace gradeff {

partiality_comonad::partiality_comonad() : alg_(bool_conj_algebra()) {}

bool partiality_comonad::live(const grade& f) {
  if (!f.is_bool()) throw error(error_kind::algebra_mismatch, "partiality expects t/f grades, got " + f.show());
  return f.flag();
}

void partiality_comonad::expect_shape(const grade& f, const value& d, const char* op) {
  if (!live(f) && !d.is(value::kind::absent)) {
    throw error(error_kind::index_mismatch, std::string(op) + ": value " + show(d) + " supplied at index f");
  }
}

sem_type partiality_comonad::carrier_of(const grade& f, const sem_type& a) const {
  return live(f) ? a : sem_type::one();
}

value partiality_comonad::fmap(const grade& f, const value::mapping& fn, const value& d) const {
  expect_shape(f, d, "fmap");
  return live(f) ? fn(d) : value::absent();
}

value partiality_comonad::epsilon(const value& d) const { return d; }

value partiality_comonad::delta(const grade& f, const grade& g, const value& d) const {
  expect_shape(alg_.combine(f, g), d, "delta");
  if (!live(f)) return value::absent();
  if (!live(g)) return value::absent();
  return d;
}

grade partiality_comonad::zip_index(const grade& f, const grade& g) const { return grade(live(f) && live(g)); }

value partiality_comonad::mzip(const grade& f, const grade& g, const value& a, const value& b) const {
  expect_shape(f, a, "mzip");
  expect_shape(g, b, "mzip");
  if (live(f) && live(g)) return value::pair(a, b);
  return value::absent();
}

grade partiality_comonad::share_index(const grade& f, const grade& g) const { return grade(live(f) || live(g)); }

value partiality_comonad::share(const grade& f, const grade& g, const value& d) const {
  expect_shape(share_index(f, g), d, "share");
  return value::pair(live(f) ? d : value::absent(), live(g) ? d : value::absent());
}

bool partiality_comonad::weaken_defined(const grade& from, const grade& to) const {
  return live(from) || !live(to);
}

value partiality_comonad::weaken(const grade& from, const grade& to, const value& d) const {
  if (!weaken_defined(from, to)) {
    throw error(error_kind::index_mismatch, "cannot strengthen demand from " + from.show() + " to " + to.show());
  }
  expect_shape(from, d, "weaken");
  return live(to) ? d : value::absent();
}

comonad_ptr make_partiality_instance() { return std::make_shared<partiality_comonad>(); }

}  // namespace gradeff
