#include <charconv>
#include <set>

#include "hmiv/dsl.hpp"

namespace hmiv::dsl {

namespace {

enum class Tok { ident, number, string, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;  // identifier, punctuation, number spelling or decoded string
  Span span;
};

struct SyntaxError {
  Diagnostic diag;
};

[[noreturn]] void fail(std::string msg, Span span) { throw SyntaxError{make_error(diag::syntax, std::move(msg), span)}; }

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.span.begin = pos_;
      if (pos_.offset >= src_.size()) {
        t.kind = Tok::end;
        t.span.end = pos_;
        out.push_back(std::move(t));
        return out;
      }
      const char c = peek();
      if (ident_start(c)) {
        t.kind = Tok::ident;
        while (pos_.offset < src_.size() && ident_char(peek())) t.text += advance();
      } else if (digit(c)) {
        t.kind = Tok::number;
        while (pos_.offset < src_.size() && digit(peek())) t.text += advance();
        if (pos_.offset < src_.size() && peek() == '.') {
          t.text += advance();
          std::size_t frac = 0;
          while (pos_.offset < src_.size() && digit(peek())) {
            t.text += advance();
            ++frac;
          }
          if (frac == 0) fail("expected digits after '.' in number", {t.span.begin, pos_});
          if (frac > 2) fail("decimal literal '" + t.text + "' has more than two fractional digits", {t.span.begin, pos_});
        }
        if (!Decimal::parse(t.text)) fail("number '" + t.text + "' is out of range", {t.span.begin, pos_});
      } else if (c == '"') {
        t.kind = Tok::string;
        advance();
        for (;;) {
          if (pos_.offset >= src_.size()) fail("unterminated string literal", {t.span.begin, pos_});
          char ch = advance();
          if (ch == '"') break;
          if (ch == '\\') {
            if (pos_.offset >= src_.size()) fail("unterminated string literal", {t.span.begin, pos_});
            ch = advance();
          }
          t.text += ch;
        }
      } else {
        t.kind = Tok::punct;
        static constexpr std::string_view two[] = {":=", "->", "<-", "!=", "<=", ">="};
        const std::string_view rest = src_.substr(pos_.offset);
        bool matched = false;
        for (auto p : two) {
          if (rest.substr(0, 2) == p) {
            t.text = std::string(p);
            advance();
            advance();
            matched = true;
            break;
          }
        }
        if (!matched) {
          static constexpr std::string_view one = "{}()[],;:=<>+-*/";
          if (one.find(c) == std::string_view::npos) {
            const auto b = static_cast<unsigned char>(c);
            std::string shown = b >= 0x20 && b < 0x7f ? std::string(1, c) : "\\x" + hex(b);
            advance();
            fail("unexpected character '" + shown + "'", {t.span.begin, pos_});
          }
          t.text = std::string(1, advance());
        }
      }
      t.span.end = pos_;
      out.push_back(std::move(t));
    }
  }

 private:
  static std::string hex(unsigned char b) {
    static constexpr char digits[] = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 15]};
  }

  char peek() const { return src_[pos_.offset]; }

  char advance() {
    const char c = src_[pos_.offset++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }

  void skip_space() {
    while (pos_.offset < src_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_.offset + 1 < src_.size() && src_[pos_.offset + 1] == '/') {
        while (pos_.offset < src_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  SourcePos pos_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  void document(Document& doc) {
    while (!at_end()) {
      const Token& k = cur();
      if (is_kw("statechart"))
        doc.statecharts.push_back(statechart());
      else if (is_kw("petrinet"))
        doc.nets.push_back(petrinet());
      else if (is_kw("taskmodel"))
        doc.taskmodels.push_back(taskmodel());
      else if (is_kw("correspondence"))
        doc.correspondences.push_back(correspondence());
      else if (is_kw("property"))
        doc.properties.push_back(property());
      else
        fail("expected a section (statechart, petrinet, taskmodel, correspondence, property), found " + describe(k),
             k.span);
    }
  }

 private:
  // --- token helpers -------------------------------------------------------

  const Token& cur() const { return t_[i_]; }
  bool at_end() const { return cur().kind == Tok::end; }
  const Token& take() {
    const Token& t = t_[i_];
    if (t.kind != Tok::end) ++i_;
    last_end_ = t.span.end;
    return t;
  }

  bool is_punct(std::string_view p) const { return cur().kind == Tok::punct && cur().text == p; }
  bool is_kw(std::string_view k) const { return cur().kind == Tok::ident && cur().text == k; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end: return "end of input";
      case Tok::string: return "string literal";
      case Tok::number: return "number '" + t.text + "'";
      default: return "'" + t.text + "'";
    }
  }

  void expect(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "', found " + describe(cur()), cur().span);
    take();
  }

  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    take();
    return true;
  }

  void keyword(std::string_view k) {
    if (!is_kw(k)) fail("expected '" + std::string(k) + "', found " + describe(cur()), cur().span);
    take();
  }

  std::string ident(const char* what = "identifier") {
    if (cur().kind != Tok::ident) fail(std::string("expected ") + what + ", found " + describe(cur()), cur().span);
    return take().text;
  }

  std::string string_lit() {
    if (cur().kind != Tok::string) fail("expected string literal, found " + describe(cur()), cur().span);
    return take().text;
  }

  Decimal number() {
    bool neg = false;
    const Span start = cur().span;
    if (accept("-")) neg = true;
    if (cur().kind != Tok::number) fail("expected number, found " + describe(cur()), cur().span);
    auto d = Decimal::parse((neg ? "-" : "") + take().text);
    if (!d) fail("number out of range", {start.begin, last_end_});
    return *d;
  }

  std::int64_t integer(const char* what) {
    const Span start = cur().span;
    const Decimal d = number();
    if (d.hundredths() % 100 != 0) fail(std::string(what) + " must be an integer", {start.begin, last_end_});
    return d.hundredths() / 100;
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out;
    expect("{");
    if (!is_punct("}")) {
      out.push_back(ident());
      while (accept(",")) out.push_back(ident());
    }
    expect("}");
    return out;
  }

  void end_item() { accept(";"); }

  Span from(SourcePos begin) const { return {begin, last_end_}; }

  // --- expressions ---------------------------------------------------------

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxExprDepth) fail("expression nested too deeply", p.cur().span);
    }
    ~DepthGuard() { --p.depth_; }
  };

  Expr expr() {
    DepthGuard g(*this);
    const SourcePos b = cur().span.begin;
    if (is_kw("if")) {
      take();
      Expr c = expr();
      keyword("then");
      Expr a = expr();
      keyword("else");
      Expr e = expr();
      Expr r = Expr::make_conditional(std::move(c), std::move(a), std::move(e));
      r.span = from(b);
      return r;
    }
    return or_expr();
  }

  Expr binary_tail(Expr lhs, SourcePos b, BinaryOp op, Expr rhs) {
    Expr r = Expr::make_binary(op, std::move(lhs), std::move(rhs));
    r.span = from(b);
    return r;
  }

  Expr or_expr() {
    const SourcePos b = cur().span.begin;
    Expr l = and_expr();
    while (is_kw("or")) {
      take();
      l = binary_tail(std::move(l), b, BinaryOp::logical_or, and_expr());
    }
    return l;
  }

  Expr and_expr() {
    const SourcePos b = cur().span.begin;
    Expr l = not_expr();
    while (is_kw("and")) {
      take();
      l = binary_tail(std::move(l), b, BinaryOp::logical_and, not_expr());
    }
    return l;
  }

  Expr not_expr() {
    DepthGuard g(*this);
    const SourcePos b = cur().span.begin;
    if (is_kw("not")) {
      take();
      Expr r = Expr::make_unary(UnaryOp::logical_not, not_expr());
      r.span = from(b);
      return r;
    }
    return comparison();
  }

  std::optional<BinaryOp> comparison_op() const {
    if (cur().kind != Tok::punct) return std::nullopt;
    const auto& s = cur().text;
    if (s == "=") return BinaryOp::eq;
    if (s == "!=") return BinaryOp::ne;
    if (s == "<") return BinaryOp::lt;
    if (s == "<=") return BinaryOp::le;
    if (s == ">") return BinaryOp::gt;
    if (s == ">=") return BinaryOp::ge;
    return std::nullopt;
  }

  Expr comparison() {
    const SourcePos b = cur().span.begin;
    Expr l = additive();
    if (auto op = comparison_op()) {
      take();
      l = binary_tail(std::move(l), b, *op, additive());
      if (comparison_op()) fail("comparisons do not chain; add parentheses", cur().span);
    }
    return l;
  }

  Expr additive() {
    const SourcePos b = cur().span.begin;
    Expr l = multiplicative();
    while (is_punct("+") || is_punct("-")) {
      const BinaryOp op = take().text == "+" ? BinaryOp::add : BinaryOp::sub;
      l = binary_tail(std::move(l), b, op, multiplicative());
    }
    return l;
  }

  Expr multiplicative() {
    const SourcePos b = cur().span.begin;
    Expr l = unary();
    while (is_punct("*") || is_punct("/")) {
      const BinaryOp op = take().text == "*" ? BinaryOp::mul : BinaryOp::div;
      l = binary_tail(std::move(l), b, op, unary());
    }
    return l;
  }

  Expr unary() {
    DepthGuard g(*this);
    const SourcePos b = cur().span.begin;
    if (is_punct("-")) {
      take();
      if (cur().kind == Tok::number) {
        auto d = Decimal::parse("-" + take().text);
        if (!d) fail("number out of range", from(b));
        Expr r = Expr::make_literal(*d);
        r.span = from(b);
        return r;
      }
      Expr r = Expr::make_unary(UnaryOp::negate, unary());
      r.span = from(b);
      return r;
    }
    return primary();
  }

  Expr primary() {
    const SourcePos b = cur().span.begin;
    const Token& t = cur();
    Expr r;
    switch (t.kind) {
      case Tok::number:
        r = Expr::make_literal(*Decimal::parse(take().text));
        break;
      case Tok::string:
        r = Expr::make_literal(take().text);
        break;
      case Tok::ident: {
        if (t.text == "true" || t.text == "false") {
          r = Expr::make_literal(take().text == "true");
          break;
        }
        static const std::set<std::string, std::less<>> reserved{"and", "or", "not", "if", "then", "else"};
        if (reserved.count(t.text)) fail("unexpected keyword '" + t.text + "' in expression", t.span);
        std::string name = take().text;
        if (accept("(")) {
          std::vector<Expr> args;
          if (!is_punct(")")) {
            args.push_back(expr());
            while (accept(",")) args.push_back(expr());
          }
          expect(")");
          r = Expr::make_call(std::move(name), std::move(args));
        } else {
          r = Expr::make_name(std::move(name));
        }
        break;
      }
      case Tok::punct:
        if (t.text == "(") {
          take();
          r = expr();
          expect(")");
          return r;
        }
        [[fallthrough]];
      default:
        fail("expected an expression, found " + describe(t), t.span);
    }
    r.span = from(b);
    return r;
  }

  // --- literals and types --------------------------------------------------

  Value literal() {
    const Token& t = cur();
    if (t.kind == Tok::string) return take().text;
    if (t.kind == Tok::ident) {
      if (t.text == "true" || t.text == "false") return take().text == "true";
      return EnumLiteral{take().text};
    }
    return number();
  }

  Type type() {
    const std::string k = ident("type");
    if (k == "bool") return Type::boolean();
    if (k == "enum") return Type::enumeration(ident_list());
    if (k == "decimal") {
      if (!accept("[")) return Type::decimal();
      const Decimal lo = number();
      expect(",");
      const Decimal hi = number();
      expect("]");
      return Type::decimal(DecimalRange{lo, hi});
    }
    if (k == "string") {
      expect("(");
      const auto n = integer("string length");
      if (n < 0 || n > 64) fail("string length must be between 0 and 64", {t_[i_ - 1].span.begin, last_end_});
      expect(",");
      std::string alphabet = string_lit();
      expect(")");
      return Type::string(static_cast<std::size_t>(n), std::move(alphabet));
    }
    fail("unknown type '" + k + "'", t_[i_ - 1].span);
  }

  // --- sections ------------------------------------------------------------

  StatechartModel statechart() {
    const SourcePos b = cur().span.begin;
    keyword("statechart");
    StatechartModel m;
    m.name = ident("statechart name");
    expect("{");
    bool have_initial = false;
    while (!is_punct("}")) {
      const Token& kw = cur();
      const SourcePos ib = kw.span.begin;
      const std::string k = ident("statechart item");
      if (k == "modes") {
        for (auto& md : ident_list()) m.modes.push_back(std::move(md));
      } else if (k == "initial") {
        if (have_initial) fail("duplicate initial declaration", from(ib));
        have_initial = true;
        m.initial_span = cur().span;
        m.initial_mode = ident("mode");
      } else if (k == "var") {
        VariableDecl v;
        v.name = ident("variable name");
        expect(":");
        v.type = type();
        expect("=");
        v.initial = literal();
        v.span = from(ib);
        m.variables.push_back(std::move(v));
      } else if (k == "events") {
        for (auto& e : ident_list()) m.declared_events.push_back(std::move(e));
      } else if (k == "timer") {
        TimerDecl tm;
        tm.name = ident("timer name");
        tm.duration_ms = integer("timer duration");
        expect("->");
        tm.event = ident("event");
        keyword("in");
        tm.modes = ident_list();
        tm.span = from(ib);
        m.timers.push_back(std::move(tm));
      } else if (k == "respond") {
        ResponseDecl r;
        r.mode = ident("mode");
        keyword("on");
        r.events = ident_list();
        r.span = from(ib);
        m.responses.push_back(std::move(r));
      } else if (k == "transition") {
        Transition t;
        t.id = ident("transition id");
        expect(":");
        t.source = ident("mode");
        expect("->");
        t.target = ident("mode");
        keyword("on");
        t.event = ident("event");
        if (is_kw("when")) {
          take();
          t.guard = expr();
        }
        if (is_kw("do")) {
          take();
          expect("{");
          while (!is_punct("}")) {
            Assignment a;
            const SourcePos ab = cur().span.begin;
            a.target = ident("variable");
            expect(":=");
            a.value = expr();
            a.span = from(ab);
            end_item();
            t.actions.push_back(std::move(a));
          }
          expect("}");
        }
        t.span = from(ib);
        m.transitions.push_back(std::move(t));
      } else {
        fail("unknown statechart item '" + k + "'", kw.span);
      }
      end_item();
    }
    expect("}");
    m.span = from(b);
    return m;
  }

  petri::Weighted arcs() {
    petri::Weighted out;
    if (cur().kind != Tok::ident) return out;
    for (;;) {
      std::string p = ident("place");
      std::int64_t w = 1;
      if (accept("*")) w = integer("arc weight");
      out.emplace_back(std::move(p), w);
      if (!accept(",")) break;
    }
    return out;
  }

  petri::PetriNet petrinet() {
    const SourcePos b = cur().span.begin;
    keyword("petrinet");
    petri::PetriNet n;
    n.name = ident("net name");
    expect("{");
    while (!is_punct("}")) {
      const Token& kw = cur();
      const SourcePos ib = kw.span.begin;
      const std::string k = ident("petrinet item");
      if (k == "places") {
        expect("{");
        if (!is_punct("}")) {
          for (;;) {
            n.places.push_back(ident("place"));
            expect("=");
            n.initial.push_back(integer("token count"));
            if (!accept(",")) break;
          }
        }
        expect("}");
      } else if (k == "transition") {
        petri::NetTransition t;
        t.id = ident("transition id");
        expect(":");
        t.inputs = arcs();
        expect("->");
        t.outputs = arcs();
        if (is_kw("on")) {
          take();
          t.event = ident("event");
        }
        t.span = from(ib);
        n.transitions.push_back(std::move(t));
      } else {
        fail("unknown petrinet item '" + k + "'", kw.span);
      }
      end_item();
    }
    expect("}");
    n.span = from(b);
    return n;
  }

  task::TaskNode task_node(int depth) {
    if (depth > kMaxTaskDepth) fail("task tree nested too deeply", cur().span);
    const SourcePos b = cur().span.begin;
    keyword("task");
    task::TaskNode n;
    n.id = ident("task id");
    expect(":");
    const Token& kt = cur();
    auto kind = task::parse_task_kind(ident("task kind"));
    if (!kind) fail("unknown task kind '" + kt.text + "'", kt.span);
    n.kind = *kind;
    if (cur().kind == Tok::string) n.label = string_lit();
    for (;;) {
      if (is_kw("produces")) {
        take();
        for (auto& s : ident_list()) n.produces.push_back(std::move(s));
      } else if (is_kw("consumes")) {
        take();
        for (auto& s : ident_list()) n.consumes.push_back(std::move(s));
      } else {
        break;
      }
    }
    if (cur().kind == Tok::ident && !is_kw("task")) {
      const Token& ot = cur();
      auto op = task::parse_operator(ot.text);
      if (!op) fail("unknown operator '" + ot.text + "'", ot.span);
      take();
      n.op = *op;
      expect("{");
      while (!is_punct("}")) n.children.push_back(task_node(depth + 1));
      expect("}");
    }
    n.span = from(b);
    end_item();
    return n;
  }

  task::TaskModel taskmodel() {
    const SourcePos b = cur().span.begin;
    keyword("taskmodel");
    task::TaskModel tm;
    tm.name = ident("task model name");
    expect("{");
    while (!is_punct("}")) {
      if (is_kw("info")) {
        const SourcePos ib = cur().span.begin;
        take();
        task::InfoItem it;
        it.id = ident("information item");
        if (cur().kind == Tok::string) it.label = string_lit();
        it.span = from(ib);
        tm.items.push_back(std::move(it));
        end_item();
      } else if (is_kw("task")) {
        const Span at = cur().span;
        auto node = task_node(0);
        if (tm.root) fail("task model '" + tm.name + "' has more than one root task", at);
        tm.root = std::move(node);
      } else {
        fail("expected 'info' or 'task', found " + describe(cur()), cur().span);
      }
    }
    expect("}");
    tm.span = from(b);
    return tm;
  }

  Correspondence correspondence() {
    const SourcePos b = cur().span.begin;
    keyword("correspondence");
    Correspondence c;
    c.name = ident("correspondence name");
    expect("{");
    while (!is_punct("}")) {
      const Token& kw = cur();
      const SourcePos ib = kw.span.begin;
      const std::string k = ident("correspondence item");
      if (k == "tasks") {
        c.task_model = ident("task model");
      } else if (k == "system") {
        c.system = ident("system");
      } else if (k == "input") {
        InputBinding ib_;
        ib_.task = ident("task");
        expect("->");
        ib_.event = ident("event");
        ib_.span = from(ib);
        c.inputs.push_back(std::move(ib_));
      } else if (k == "output") {
        OutputBinding ob;
        ob.task = ident("task");
        expect("<-");
        ob.observation = expr();
        ob.span = from(ib);
        c.outputs.push_back(std::move(ob));
      } else if (k == "inputs") {
        auto evs = ident_list();
        if (!c.system_inputs) c.system_inputs.emplace();
        for (auto& e : evs) c.system_inputs->push_back(std::move(e));
      } else {
        fail("unknown correspondence item '" + k + "'", kw.span);
      }
      end_item();
    }
    expect("}");
    c.span = from(b);
    return c;
  }

  std::vector<Expr> expr_tuple() {
    std::vector<Expr> out;
    expect("(");
    if (!is_punct(")")) {
      out.push_back(expr());
      while (accept(",")) out.push_back(expr());
    }
    expect(")");
    return out;
  }

  check::PropertySpec property() {
    const SourcePos b = cur().span.begin;
    keyword("property");
    check::PropertySpec p;
    p.name = ident("property name");
    keyword("on");
    p.system = ident("statechart");
    expect("{");
    while (!is_punct("}")) {
      const Token& kw = cur();
      const std::string k = ident("property item");
      if (k == "always") {
        p.always = expr();
      } else if (k == "actions") {
        expect("{");
        if (!is_punct("}")) {
          for (;;) {
            check::ActionRef a;
            const SourcePos ab = cur().span.begin;
            a.event = ident("event");
            if (is_kw("in")) {
              take();
              a.mode = ident("mode");
            }
            a.span = from(ab);
            p.actions.push_back(std::move(a));
            if (!accept(",")) break;
          }
        }
        expect("}");
      } else if (k == "guard") {
        p.guard = expr();
      } else if (k == "pre") {
        p.filter_pre = expr_tuple();
      } else if (k == "post") {
        p.filter_post = expr_tuple();
      } else if (k == "relation") {
        const bool simple = cur().kind == Tok::ident && (cur().text == "equal" || cur().text == "not_equal") &&
                            i_ + 1 < t_.size() && (t_[i_ + 1].text == ";" || t_[i_ + 1].text == "}");
        if (simple) {
          p.relation = take().text == "equal" ? check::Relation::equal : check::Relation::not_equal;
        } else {
          p.relation = check::Relation::custom;
          p.custom = expr();
        }
      } else if (k == "method") {
        const Token& mt = cur();
        const std::string m = ident("method");
        if (m == "inductive")
          p.method = check::Method::inductive;
        else if (m == "reachable")
          p.method = check::Method::reachable;
        else if (m == "both")
          p.method = check::Method::both;
        else
          fail("unknown method '" + m + "' (inductive, reachable, both)", mt.span);
      } else {
        fail("unknown property item '" + k + "'", kw.span);
      }
      end_item();
    }
    expect("}");
    p.span = from(b);
    return p;
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  SourcePos last_end_;
  int depth_ = 0;
};

}  // namespace

ParseResult parse_document(std::string_view text) {
  ParseResult r;
  try {
    Parser p(Lexer(text).run());
    p.document(r.document);
  } catch (const SyntaxError& e) {
    r.document = Document{};
    r.diagnostics.push_back(e.diag);
    return r;
  }
  r.diagnostics = resolve_document(r.document);
  return r;
}

}  // namespace hmiv::dsl
