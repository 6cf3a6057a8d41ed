#include "hmiv/expr.hpp"

#include <algorithm>
#include <array>
#include <string_view>

#include "hmiv/error.hpp"
#include "hmiv/fcu.hpp"

namespace hmiv {

bool Expr::operator==(const Expr& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case ExprKind::literal: return literal == o.literal;
    case ExprKind::name: return name == o.name;
    case ExprKind::unary: return unary == o.unary && args == o.args;
    case ExprKind::binary: return binary == o.binary && args == o.args;
    case ExprKind::call: return name == o.name && args == o.args;
    case ExprKind::conditional: return args == o.args;
  }
  return false;
}

Expr Expr::make_literal(Value v) {
  Expr e;
  e.kind = ExprKind::literal;
  e.literal = std::move(v);
  return e;
}

Expr Expr::make_name(std::string n) {
  Expr e;
  e.kind = ExprKind::name;
  e.name = std::move(n);
  return e;
}

Expr Expr::make_unary(UnaryOp op, Expr x) {
  Expr e;
  e.kind = ExprKind::unary;
  e.unary = op;
  e.args.push_back(std::move(x));
  return e;
}

Expr Expr::make_binary(BinaryOp op, Expr l, Expr r) {
  Expr e;
  e.kind = ExprKind::binary;
  e.binary = op;
  e.args.push_back(std::move(l));
  e.args.push_back(std::move(r));
  return e;
}

Expr Expr::make_call(std::string fn, std::vector<Expr> args) {
  Expr e;
  e.kind = ExprKind::call;
  e.name = std::move(fn);
  e.args = std::move(args);
  return e;
}

Expr Expr::make_conditional(Expr c, Expr t, Expr f) {
  Expr e;
  e.kind = ExprKind::conditional;
  e.args.push_back(std::move(c));
  e.args.push_back(std::move(t));
  e.args.push_back(std::move(f));
  return e;
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::eq: return "=";
    case BinaryOp::ne: return "!=";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::logical_and: return "and";
    case BinaryOp::logical_or: return "or";
  }
  return "?";
}

namespace {

struct BuiltinInfo {
  std::string_view name;
  Builtin id;
  std::size_t arity;
};

constexpr std::array<BuiltinInfo, 13> kBuiltins{{
    {"len", Builtin::len, 1},
    {"append", Builtin::append, 2},
    {"drop_last", Builtin::drop_last, 1},
    {"contains", Builtin::contains, 2},
    {"to_decimal", Builtin::to_decimal, 1},
    {"clamp", Builtin::clamp, 3},
    {"min", Builtin::min, 2},
    {"max", Builtin::max, 2},
    {"abs", Builtin::abs, 1},
    {"inhg_to_hpa", Builtin::inhg_to_hpa, 1},
    {"hpa_to_inhg", Builtin::hpa_to_inhg, 1},
    {"pre", Builtin::pre, 1},
    {"post", Builtin::post, 1},
}};

const BuiltinInfo* find_builtin(std::string_view n) {
  for (const auto& b : kBuiltins)
    if (b.name == n) return &b;
  return nullptr;
}

[[noreturn]] void mismatch(const char* what) { throw TypeMismatch(std::string("type mismatch: ") + what); }

Decimal as_decimal(const Value& v) {
  if (auto p = std::get_if<Decimal>(&v)) return *p;
  mismatch("expected decimal");
}

bool as_bool(const Value& v) {
  if (auto p = std::get_if<bool>(&v)) return *p;
  mismatch("expected bool");
}

const std::string& as_string(const Value& v) {
  if (auto p = std::get_if<std::string>(&v)) return *p;
  mismatch("expected string");
}

std::size_t projection_index(const Expr& e) {
  const auto& lit = e.args[0].literal;
  return static_cast<std::size_t>(std::get<Decimal>(lit).hundredths() / 100);
}

Value eval_call(const Expr& e, const EvalContext& ctx) {
  auto arg = [&](std::size_t i) { return evaluate(e.args[i], ctx); };
  switch (e.builtin) {
    case Builtin::len:
      return Decimal::from_whole(static_cast<std::int64_t>(as_string(arg(0)).size()));
    case Builtin::append:
      return as_string(arg(0)) + as_string(arg(1));
    case Builtin::drop_last: {
      std::string s = as_string(arg(0));
      if (!s.empty()) s.pop_back();
      return s;
    }
    case Builtin::contains:
      return as_string(arg(0)).find(as_string(arg(1))) != std::string::npos;
    case Builtin::to_decimal:
      return Decimal::from_entry(as_string(arg(0)));
    case Builtin::clamp: {
      const Decimal v = as_decimal(arg(0)), lo = as_decimal(arg(1)), hi = as_decimal(arg(2));
      return std::max(lo, std::min(v, hi));
    }
    case Builtin::min:
      return std::min(as_decimal(arg(0)), as_decimal(arg(1)));
    case Builtin::max:
      return std::max(as_decimal(arg(0)), as_decimal(arg(1)));
    case Builtin::abs: {
      const Decimal v = as_decimal(arg(0));
      return v < Decimal{} ? -v : v;
    }
    case Builtin::inhg_to_hpa:
      return fcu::inhg_to_hpa(as_decimal(arg(0)));
    case Builtin::hpa_to_inhg:
      return fcu::hpa_to_inhg(as_decimal(arg(0)));
    case Builtin::pre: {
      const auto i = projection_index(e);
      if (i >= ctx.pre.size()) mismatch("projection index");
      return ctx.pre[i];
    }
    case Builtin::post: {
      const auto i = projection_index(e);
      if (i >= ctx.post.size()) mismatch("projection index");
      return ctx.post[i];
    }
    case Builtin::none:
      break;
  }
  throw TypeMismatch("unresolved function '" + e.name + "'");
}

}  // namespace

Value evaluate(const Expr& e, const EvalContext& ctx) {
  switch (e.kind) {
    case ExprKind::literal:
      return e.literal;
    case ExprKind::name:
      switch (e.ref) {
        case NameRef::variable:
          if (e.index >= ctx.vars.size()) mismatch("variable slot");
          return ctx.vars[e.index];
        case NameRef::enum_literal:
          return EnumLiteral{e.name};
        case NameRef::mode_keyword:
          return ModeId{ctx.mode};
        case NameRef::mode_name:
          return ModeId{e.index};
        case NameRef::unresolved:
          break;
      }
      throw TypeMismatch("unresolved name '" + e.name + "'");
    case ExprKind::unary: {
      const Value v = evaluate(e.args[0], ctx);
      if (e.unary == UnaryOp::logical_not) return !as_bool(v);
      return -as_decimal(v);
    }
    case ExprKind::binary: {
      if (e.binary == BinaryOp::logical_and)
        return as_bool(evaluate(e.args[0], ctx)) && as_bool(evaluate(e.args[1], ctx));
      if (e.binary == BinaryOp::logical_or)
        return as_bool(evaluate(e.args[0], ctx)) || as_bool(evaluate(e.args[1], ctx));
      const Value l = evaluate(e.args[0], ctx);
      const Value r = evaluate(e.args[1], ctx);
      switch (e.binary) {
        case BinaryOp::add: return as_decimal(l) + as_decimal(r);
        case BinaryOp::sub: return as_decimal(l) - as_decimal(r);
        case BinaryOp::mul: return as_decimal(l) * as_decimal(r);
        case BinaryOp::div: return as_decimal(l) / as_decimal(r);
        case BinaryOp::eq:
          if (l.index() != r.index()) mismatch("equality operands");
          return l == r;
        case BinaryOp::ne:
          if (l.index() != r.index()) mismatch("equality operands");
          return l != r;
        case BinaryOp::lt: return as_decimal(l) < as_decimal(r);
        case BinaryOp::le: return as_decimal(l) <= as_decimal(r);
        case BinaryOp::gt: return as_decimal(l) > as_decimal(r);
        case BinaryOp::ge: return as_decimal(l) >= as_decimal(r);
        default: break;
      }
      mismatch("binary operator");
    }
    case ExprKind::call:
      return eval_call(e, ctx);
    case ExprKind::conditional:
      return as_bool(evaluate(e.args[0], ctx)) ? evaluate(e.args[1], ctx) : evaluate(e.args[2], ctx);
  }
  mismatch("expression kind");
}

bool evaluate_bool(const Expr& e, const EvalContext& ctx) { return as_bool(evaluate(e, ctx)); }

// ---------------------------------------------------------------------------
// Resolution and type checking

namespace {

class Resolver {
 public:
  Resolver(const Scope& scope, std::vector<Diagnostic>& diags) : scope_(scope), diags_(diags) {}

  std::optional<StaticType> run(Expr& e) {
    switch (e.kind) {
      case ExprKind::literal:
        return StaticType{kind_of(e.literal), nullptr};
      case ExprKind::name:
        return name(e);
      case ExprKind::unary: {
        auto t = run(e.args[0]);
        if (!t) return std::nullopt;
        const TypeKind want = e.unary == UnaryOp::logical_not ? TypeKind::boolean : TypeKind::decimal;
        if (!expect(e.args[0], *t, want)) return std::nullopt;
        return StaticType{want, nullptr};
      }
      case ExprKind::binary:
        return binary(e);
      case ExprKind::call:
        return call(e);
      case ExprKind::conditional: {
        auto c = run(e.args[0]);
        auto a = run(e.args[1]);
        auto b = run(e.args[2]);
        if (!c || !a || !b) return std::nullopt;
        if (!expect(e.args[0], *c, TypeKind::boolean)) return std::nullopt;
        if (!compatible(*a, *b)) {
          error(e, std::string("branches of 'if' have different types (") + to_string(a->kind) + " vs " +
                       to_string(b->kind) + ")");
          return std::nullopt;
        }
        return a->literals ? *a : *b;
      }
    }
    return std::nullopt;
  }

 private:
  void error(const Expr& e, std::string msg, const char* code = diag::type_error) {
    diags_.push_back(make_error(code, std::move(msg), e.span));
  }

  bool expect(const Expr& e, const StaticType& t, TypeKind k) {
    if (t.kind == k) return true;
    error(e, std::string("expected ") + to_string(k) + ", found " + to_string(t.kind));
    return false;
  }

  static bool compatible(const StaticType& a, const StaticType& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == TypeKind::enumeration && a.literals && b.literals && *a.literals != *b.literals) return false;
    return true;
  }

  std::optional<StaticType> name(Expr& e) {
    if (e.name == "mode") {
      e.ref = NameRef::mode_keyword;
      return StaticType{TypeKind::mode, nullptr};
    }
    for (std::size_t i = 0; i < scope_.variables.size(); ++i) {
      if (scope_.variables[i].name == e.name) {
        e.ref = NameRef::variable;
        e.index = static_cast<std::uint32_t>(i);
        const Type* t = scope_.variables[i].type;
        return StaticType{t->kind, t->kind == TypeKind::enumeration ? &t->literals : nullptr};
      }
    }
    if (std::find(scope_.enum_literals.begin(), scope_.enum_literals.end(), e.name) != scope_.enum_literals.end()) {
      e.ref = NameRef::enum_literal;
      e.literal = EnumLiteral{e.name};
      return StaticType{TypeKind::enumeration, nullptr};
    }
    for (std::size_t i = 0; i < scope_.modes.size(); ++i) {
      if (scope_.modes[i] == e.name) {
        e.ref = NameRef::mode_name;
        e.index = static_cast<std::uint32_t>(i);
        return StaticType{TypeKind::mode, nullptr};
      }
    }
    error(e, "unresolved name '" + e.name + "'", diag::unresolved);
    return std::nullopt;
  }

  std::optional<StaticType> binary(Expr& e) {
    auto l = run(e.args[0]);
    auto r = run(e.args[1]);
    if (!l || !r) return std::nullopt;
    switch (e.binary) {
      case BinaryOp::add:
      case BinaryOp::sub:
      case BinaryOp::mul:
      case BinaryOp::div:
        if (!expect(e.args[0], *l, TypeKind::decimal) || !expect(e.args[1], *r, TypeKind::decimal))
          return std::nullopt;
        return StaticType{TypeKind::decimal, nullptr};
      case BinaryOp::lt:
      case BinaryOp::le:
      case BinaryOp::gt:
      case BinaryOp::ge:
        if (!expect(e.args[0], *l, TypeKind::decimal) || !expect(e.args[1], *r, TypeKind::decimal))
          return std::nullopt;
        return StaticType{TypeKind::boolean, nullptr};
      case BinaryOp::eq:
      case BinaryOp::ne: {
        if (!compatible(*l, *r)) {
          error(e, std::string("cannot compare ") + to_string(l->kind) + " with " + to_string(r->kind));
          return std::nullopt;
        }
        // An enum literal compared with a typed enum must belong to it.
        auto check_member = [&](const StaticType& typed, const Expr& other) {
          if (typed.kind == TypeKind::enumeration && typed.literals && other.kind == ExprKind::name &&
              other.ref == NameRef::enum_literal &&
              std::find(typed.literals->begin(), typed.literals->end(), other.name) == typed.literals->end()) {
            error(other, "'" + other.name + "' is not a literal of the compared enum");
            return false;
          }
          return true;
        };
        if (!check_member(*l, e.args[1]) || !check_member(*r, e.args[0])) return std::nullopt;
        return StaticType{TypeKind::boolean, nullptr};
      }
      case BinaryOp::logical_and:
      case BinaryOp::logical_or:
        if (!expect(e.args[0], *l, TypeKind::boolean) || !expect(e.args[1], *r, TypeKind::boolean))
          return std::nullopt;
        return StaticType{TypeKind::boolean, nullptr};
    }
    return std::nullopt;
  }

  std::optional<StaticType> call(Expr& e) {
    const BuiltinInfo* b = find_builtin(e.name);
    if (!b) {
      error(e, "unknown function '" + e.name + "'", diag::unresolved);
      return std::nullopt;
    }
    if (e.args.size() != b->arity) {
      error(e, "'" + e.name + "' expects " + std::to_string(b->arity) + " argument(s)");
      return std::nullopt;
    }
    e.builtin = b->id;
    if (b->id == Builtin::pre || b->id == Builtin::post) {
      if (!scope_.allow_projections) {
        error(e, "'" + e.name + "' is only valid inside a property relation");
        return std::nullopt;
      }
      const Expr& a = e.args[0];
      const auto& proj = b->id == Builtin::pre ? scope_.pre : scope_.post;
      if (a.kind != ExprKind::literal || kind_of(a.literal) != TypeKind::decimal ||
          std::get<Decimal>(a.literal).hundredths() % 100 != 0 || std::get<Decimal>(a.literal).hundredths() < 0 ||
          static_cast<std::size_t>(std::get<Decimal>(a.literal).hundredths() / 100) >= proj.size()) {
        error(e, "projection index must be an integer literal below " + std::to_string(proj.size()));
        return std::nullopt;
      }
      return proj[static_cast<std::size_t>(std::get<Decimal>(a.literal).hundredths() / 100)];
    }
    std::vector<StaticType> ts;
    for (auto& a : e.args) {
      auto t = run(a);
      if (!t) return std::nullopt;
      ts.push_back(*t);
    }
    auto want = [&](std::initializer_list<TypeKind> kinds) {
      std::size_t i = 0;
      for (TypeKind k : kinds) {
        if (!expect(e.args[i], ts[i], k)) return false;
        ++i;
      }
      return true;
    };
    using K = TypeKind;
    switch (b->id) {
      case Builtin::len:
        if (!want({K::string})) return std::nullopt;
        return StaticType{K::decimal, nullptr};
      case Builtin::append:
        if (!want({K::string, K::string})) return std::nullopt;
        return StaticType{K::string, nullptr};
      case Builtin::drop_last:
        if (!want({K::string})) return std::nullopt;
        return StaticType{K::string, nullptr};
      case Builtin::contains:
        if (!want({K::string, K::string})) return std::nullopt;
        return StaticType{K::boolean, nullptr};
      case Builtin::to_decimal:
        if (!want({K::string})) return std::nullopt;
        return StaticType{K::decimal, nullptr};
      case Builtin::clamp:
        if (!want({K::decimal, K::decimal, K::decimal})) return std::nullopt;
        return StaticType{K::decimal, nullptr};
      case Builtin::min:
      case Builtin::max:
        if (!want({K::decimal, K::decimal})) return std::nullopt;
        return StaticType{K::decimal, nullptr};
      default:
        if (!want({K::decimal})) return std::nullopt;
        return StaticType{K::decimal, nullptr};
    }
  }

  const Scope& scope_;
  std::vector<Diagnostic>& diags_;
};

}  // namespace

std::optional<StaticType> resolve(Expr& e, const Scope& scope, std::vector<Diagnostic>& diags) {
  return Resolver(scope, diags).run(e);
}

void collect_reads(const Expr& e, std::vector<bool>& reads) {
  if (e.kind == ExprKind::name && e.ref == NameRef::variable) {
    if (e.index >= reads.size()) reads.resize(e.index + 1, false);
    reads[e.index] = true;
  }
  for (const auto& a : e.args) collect_reads(a, reads);
}

bool reads_mode(const Expr& e) {
  if (e.kind == ExprKind::name && e.ref == NameRef::mode_keyword) return true;
  return std::any_of(e.args.begin(), e.args.end(), [](const Expr& a) { return reads_mode(a); });
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::conditional: return 0;
    case ExprKind::binary:
      switch (e.binary) {
        case BinaryOp::logical_or: return 1;
        case BinaryOp::logical_and: return 2;
        case BinaryOp::add:
        case BinaryOp::sub: return 5;
        case BinaryOp::mul:
        case BinaryOp::div: return 6;
        default: return 4;
      }
    case ExprKind::unary:
      return e.unary == UnaryOp::logical_not ? 3 : 7;
    case ExprKind::literal:
      // Negative literals print with a leading '-', which binds like unary minus.
      if (auto d = std::get_if<Decimal>(&e.literal); d && *d < Decimal{}) return 7;
      return 8;
    default:
      return 8;
  }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& c, int min_prec, std::string& out) {
  if (precedence(c) < min_prec) {
    out += '(';
    print(c, out);
    out += ')';
  } else {
    print(c, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::literal:
      out += format_value(e.literal);
      return;
    case ExprKind::name:
      out += e.name;
      return;
    case ExprKind::unary:
      if (e.unary == UnaryOp::logical_not) {
        out += "not ";
        print_child(e.args[0], 3, out);
      } else {
        out += '-';
        // "--x" would not re-parse as two negations of a literal; keep a space.
        if (precedence(e.args[0]) == 7) out += ' ';
        print_child(e.args[0], 7, out);
      }
      return;
    case ExprKind::binary: {
      const int p = precedence(e);
      if (p == 4) {
        print_child(e.args[0], 5, out);
        out += ' ';
        out += to_string(e.binary);
        out += ' ';
        print_child(e.args[1], 5, out);
      } else {
        print_child(e.args[0], p, out);
        out += ' ';
        out += to_string(e.binary);
        out += ' ';
        print_child(e.args[1], p + 1, out);
      }
      return;
    }
    case ExprKind::call:
      out += e.name;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print(e.args[i], out);
      }
      out += ')';
      return;
    case ExprKind::conditional:
      out += "if ";
      print(e.args[0], out);
      out += " then ";
      print(e.args[1], out);
      out += " else ";
      print(e.args[2], out);
      return;
  }
}

}  // namespace

std::string to_source(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

}  // namespace hmiv
