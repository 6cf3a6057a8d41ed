#include "hmiv/value.hpp"

#include <algorithm>
#include <functional>

namespace hmiv {

const char* to_string(TypeKind k) {
  switch (k) {
    case TypeKind::boolean: return "bool";
    case TypeKind::enumeration: return "enum";
    case TypeKind::decimal: return "decimal";
    case TypeKind::string: return "string";
    case TypeKind::mode: return "mode";
  }
  return "?";
}

TypeKind kind_of(const Value& v) {
  switch (v.index()) {
    case 0: return TypeKind::boolean;
    case 1: return TypeKind::decimal;
    case 2: return TypeKind::string;
    case 3: return TypeKind::enumeration;
    default: return TypeKind::mode;
  }
}

bool in_domain(const Value& v, const Type& t) {
  if (kind_of(v) != t.kind) return false;
  switch (t.kind) {
    case TypeKind::boolean:
      return true;
    case TypeKind::enumeration: {
      const auto& lit = std::get<EnumLiteral>(v).name;
      return std::find(t.literals.begin(), t.literals.end(), lit) != t.literals.end();
    }
    case TypeKind::decimal: {
      if (!t.range) return true;
      const Decimal d = std::get<Decimal>(v);
      return d >= t.range->lo && d <= t.range->hi;
    }
    case TypeKind::string: {
      const auto& s = std::get<std::string>(v);
      if (s.size() > t.max_length) return false;
      return std::all_of(s.begin(), s.end(),
                         [&](char c) { return t.alphabet.find(c) != std::string::npos; });
    }
    case TypeKind::mode:
      return true;
  }
  return false;
}

static std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string plain_value(const Value& v, const std::vector<std::string>* modes) {
  switch (v.index()) {
    case 0: return std::get<bool>(v) ? "true" : "false";
    case 1: return std::get<Decimal>(v).to_string();
    case 2: return std::get<std::string>(v);
    case 3: return std::get<EnumLiteral>(v).name;
    default: {
      const auto idx = std::get<ModeId>(v).index;
      if (modes && idx < modes->size()) return (*modes)[idx];
      return "#" + std::to_string(idx);
    }
  }
}

std::string format_value(const Value& v, const std::vector<std::string>* modes) {
  if (v.index() == 2) return quote(std::get<std::string>(v));
  return plain_value(v, modes);
}

std::size_t hash_value(const Value& v) {
  std::size_t h = v.index() * 0x9e3779b97f4a7c15ULL;
  switch (v.index()) {
    case 0: return h ^ std::get<bool>(v);
    case 1: return h ^ std::hash<std::int64_t>{}(std::get<Decimal>(v).hundredths());
    case 2: return h ^ std::hash<std::string>{}(std::get<std::string>(v));
    case 3: return h ^ std::hash<std::string>{}(std::get<EnumLiteral>(v).name);
    default: return h ^ std::get<ModeId>(v).index;
  }
}

}  // namespace hmiv
