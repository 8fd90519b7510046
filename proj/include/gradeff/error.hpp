#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradeff {

struct source_pos {
  int line = 0;
  int col = 0;

  bool known() const { return line > 0; }
  friend bool operator==(const source_pos&, const source_pos&) = default;
};

enum class error_kind {
  syntax,
  scope,
  type,
  no_lattice,
  effect_escape,
  index_overflow,
  index_mismatch,
  env_domain_mismatch,
  algebra_mismatch,
  enumeration_budget_exceeded,
  unsupported_primitive,
  input_mismatch,
  usage,
};

std::string_view to_string(error_kind k);

// Every analysis and semantic failure in the library is reported with this
// exception; callers dispatch on kind().
class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& message, source_pos pos = {})
      : std::runtime_error(message), kind_(kind), pos_(pos) {}

  error_kind kind() const { return kind_; }
  source_pos pos() const { return pos_; }

  // "kind at line:col: message"
  std::string describe() const;

 private:
  error_kind kind_;
  source_pos pos_;
};

}  // namespace gradeff
