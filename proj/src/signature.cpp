#include "gradeff/signature.hpp"

#include "gradeff/error.hpp"

namespace gradeff {

std::string_view to_string(base_type b) {
  switch (b) {
    case base_type::unit: return "unit";
    case base_type::boolean: return "bool";
    case base_type::int4: return "int4";
  }
  return "?";
}

std::optional<base_type> parse_base_type(std::string_view text) {
  if (text == "unit") return base_type::unit;
  if (text == "bool") return base_type::boolean;
  if (text == "int4") return base_type::int4;
  return std::nullopt;
}

sem_type sem_of(base_type b) {
  switch (b) {
    case base_type::unit: return sem_type::unit();
    case base_type::boolean: return sem_type::boolean();
    case base_type::int4: return sem_type::int_mod(4);
  }
  return sem_type::unit();
}

void signature::declare(name_kind k, const std::string& name, base_type type) {
  if (lookup(name)) throw error(error_kind::scope, "name '" + name + "' is declared twice");
  switch (k) {
    case name_kind::param: params.emplace(name, type); break;
    case name_kind::region: regions.emplace(name, type); break;
    case name_kind::tag: tags.emplace(name, type); break;
  }
}

std::optional<signature::name_kind> signature::lookup(const std::string& name) const {
  if (params.contains(name)) return name_kind::param;
  if (regions.contains(name)) return name_kind::region;
  if (tags.contains(name)) return name_kind::tag;
  return std::nullopt;
}

token_set signature::param_tokens() const {
  token_set out;
  for (const auto& [name, _] : params) out.insert(effect_token::ip(name));
  return out;
}

token_set signature::memory_tokens() const {
  token_set out;
  for (const auto& [name, _] : regions) {
    out.insert(effect_token::rd(name));
    out.insert(effect_token::wr(name));
  }
  return out;
}

token_set signature::effect_tokens() const {
  token_set out = param_tokens();
  auto mem = memory_tokens();
  out.insert(mem.begin(), mem.end());
  return out;
}

std::set<std::string> signature::tag_names() const {
  std::set<std::string> out;
  for (const auto& [name, _] : tags) out.insert(name);
  return out;
}

sem_type signature::token_type(const effect_token& t) const {
  const std::map<std::string, base_type>* table = nullptr;
  switch (t.k) {
    case effect_token::kind::implicit_param: table = &params; break;
    case effect_token::kind::read:
    case effect_token::kind::write: table = &regions; break;
    case effect_token::kind::out: table = &tags; break;
  }
  auto it = table->find(t.name);
  if (it == table->end()) throw error(error_kind::scope, "undeclared name in token '" + t.show() + "'");
  return sem_of(it->second);
}

}  // namespace gradeff
