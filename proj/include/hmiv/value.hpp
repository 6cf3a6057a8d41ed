#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hmiv/decimal.hpp"

namespace hmiv {

enum class TypeKind : std::uint8_t { boolean, enumeration, decimal, string, mode };

const char* to_string(TypeKind k);

struct DecimalRange {
  Decimal lo;
  Decimal hi;
  bool operator==(const DecimalRange&) const = default;
};

// Declared type of a state variable.
struct Type {
  TypeKind kind = TypeKind::boolean;
  std::vector<std::string> literals;   // enumeration
  std::optional<DecimalRange> range;   // decimal; absent means unbounded
  std::size_t max_length = 0;          // string
  std::string alphabet;                // string

  bool operator==(const Type&) const = default;

  static Type boolean() { return Type{}; }
  static Type enumeration(std::vector<std::string> lits) {
    Type t;
    t.kind = TypeKind::enumeration;
    t.literals = std::move(lits);
    return t;
  }
  static Type decimal(std::optional<DecimalRange> r = std::nullopt) {
    Type t;
    t.kind = TypeKind::decimal;
    t.range = r;
    return t;
  }
  static Type string(std::size_t max_len, std::string alphabet) {
    Type t;
    t.kind = TypeKind::string;
    t.max_length = max_len;
    t.alphabet = std::move(alphabet);
    return t;
  }
};

struct EnumLiteral {
  std::string name;
  bool operator==(const EnumLiteral&) const = default;
};

struct ModeId {
  std::uint32_t index = 0;
  bool operator==(const ModeId&) const = default;
};

using Value = std::variant<bool, Decimal, std::string, EnumLiteral, ModeId>;

TypeKind kind_of(const Value& v);

// Membership of a value in the declared domain of a type.
bool in_domain(const Value& v, const Type& t);

// Human-readable rendering; strings are quoted, modes print as "#<index>"
// unless a mode table is supplied.
std::string format_value(const Value& v, const std::vector<std::string>* modes = nullptr);

// Rendering without quotes, used in state JSON ("value-as-string").
std::string plain_value(const Value& v, const std::vector<std::string>* modes = nullptr);

std::size_t hash_value(const Value& v);

}  // namespace hmiv
