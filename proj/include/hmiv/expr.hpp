#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hmiv/diagnostic.hpp"
#include "hmiv/value.hpp"

namespace hmiv {

enum class ExprKind : std::uint8_t { literal, name, unary, binary, call, conditional };

enum class UnaryOp : std::uint8_t { negate, logical_not };

enum class BinaryOp : std::uint8_t {
  add, sub, mul, div,
  eq, ne, lt, le, gt, ge,
  logical_and, logical_or,
};

// What a name refers to, filled in by resolve().
enum class NameRef : std::uint8_t {
  unresolved,
  variable,
  enum_literal,
  mode_keyword,     // the reserved name `mode`: the current mode
  mode_name,
};

enum class Builtin : std::uint8_t {
  none,
  len, append, drop_last, contains, to_decimal,
  clamp, min, max, abs,
  inhg_to_hpa, hpa_to_inhg,
  pre, post,        // projection access inside property relations
};

// Guard/action expression tree. Structural equality ignores spans and
// resolution data.
struct Expr {
  ExprKind kind = ExprKind::literal;
  Value literal;
  std::string name;  // name reference or called function
  UnaryOp unary = UnaryOp::negate;
  BinaryOp binary = BinaryOp::add;
  std::vector<Expr> args;
  Span span;

  NameRef ref = NameRef::unresolved;
  std::uint32_t index = 0;
  Builtin builtin = Builtin::none;

  bool operator==(const Expr& o) const;

  static Expr make_literal(Value v);
  static Expr make_name(std::string n);
  static Expr make_unary(UnaryOp op, Expr e);
  static Expr make_binary(BinaryOp op, Expr l, Expr r);
  static Expr make_call(std::string fn, std::vector<Expr> args);
  static Expr make_conditional(Expr c, Expr t, Expr e);
};

struct EvalContext {
  std::span<const Value> vars;
  std::uint32_t mode = 0;
  std::span<const Value> pre;
  std::span<const Value> post;
};

Value evaluate(const Expr& e, const EvalContext& ctx);
bool evaluate_bool(const Expr& e, const EvalContext& ctx);

// Static type of a resolved expression.
struct StaticType {
  TypeKind kind = TypeKind::boolean;
  const std::vector<std::string>* literals = nullptr;  // enums with a known literal set
};

// Name environment for resolution.
struct Scope {
  struct Var {
    std::string name;
    const Type* type;
  };
  std::vector<Var> variables;
  std::vector<std::string> modes;
  std::vector<std::string> enum_literals;  // union over all enum types
  std::vector<StaticType> pre;             // projection types for relations
  std::vector<StaticType> post;
  bool allow_projections = false;
};

// Resolves names and type-checks. Returns the static type or nullopt on
// error (diagnostics appended).
std::optional<StaticType> resolve(Expr& e, const Scope& scope, std::vector<Diagnostic>& diags);

// Marks every variable slot the expression reads.
void collect_reads(const Expr& e, std::vector<bool>& reads);
bool reads_mode(const Expr& e);

// Canonical source rendering (minimal parentheses).
std::string to_source(const Expr& e);

const char* to_string(BinaryOp op);

}  // namespace hmiv
