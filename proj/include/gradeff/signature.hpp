#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "gradeff/effect_algebra.hpp"
#include "gradeff/value.hpp"

namespace gradeff {

enum class base_type { unit, boolean, int4 };

std::string_view to_string(base_type b);
std::optional<base_type> parse_base_type(std::string_view text);
sem_type sem_of(base_type b);

// Declared names of a program: implicit parameters, memory regions and output
// tags. Names are unique across the three namespaces.
struct signature {
  enum class name_kind { param, region, tag };

  std::map<std::string, base_type> params;
  std::map<std::string, base_type> regions;
  std::map<std::string, base_type> tags;

  // Throws scope error when the name is already declared in any namespace.
  void declare(name_kind k, const std::string& name, base_type type);
  std::optional<name_kind> lookup(const std::string& name) const;

  token_set param_tokens() const;
  token_set memory_tokens() const;   // rd and wr for every region
  token_set effect_tokens() const;   // param_tokens + memory_tokens
  std::set<std::string> tag_names() const;

  // sem type of the payload a token carries (param/region/tag type)
  sem_type token_type(const effect_token& t) const;

  friend bool operator==(const signature&, const signature&) = default;
};

}  // namespace gradeff
