#include "lawfuzz/parser.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <variant>

namespace lawfuzz {

Formula SpecFile::law() const {
  const Formula* f = find(law_name);
  if (!f) throw std::runtime_error("spec has no law named '" + law_name + "'");
  return *f;
}

const Formula* SpecFile::find(const std::string& name) const {
  for (const auto& d : definitions) {
    if (d.name == name) return &d.body;
  }
  return nullptr;
}

namespace {

enum class Tok {
  Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Semi,
  And, Or, Not, Implies, Bind,  // Bind is |=
  EqEq, Ne, Ge, Le, Gt, Lt, Assign,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { next(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

 private:
  void next() {
    skip_ws();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, "", 0, line_, col_};
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < src_.size()) {
        char d = src_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
          id += d;
          advance();
        } else {
          break;
        }
      }
      tok_ = {Tok::Ident, id, 0, tok_.line, tok_.col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      read_number(false);
      return;
    }
    switch (c) {
      case '(': one(Tok::LParen); return;
      case ')': one(Tok::RParen); return;
      case '[': one(Tok::LBracket); return;
      case ']': one(Tok::RBracket); return;
      case ',': one(Tok::Comma); return;
      case ';': one(Tok::Semi); return;
      case '&': one(Tok::And); return;
      case '~': one(Tok::Not); return;
      case '|':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          tok_ = {Tok::Bind, "|=", 0, tok_.line, tok_.col};
        } else {
          tok_ = {Tok::Or, "|", 0, tok_.line, tok_.col};
        }
        return;
      case '-':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '>') {
          advance();
          tok_ = {Tok::Implies, "->", 0, tok_.line, tok_.col};
          return;
        }
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          read_number(true);
          return;
        }
        throw ParseError("stray '-'", tok_.line, tok_.col);
      case '=':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          tok_ = {Tok::EqEq, "==", 0, tok_.line, tok_.col};
        } else {
          tok_ = {Tok::Assign, "=", 0, tok_.line, tok_.col};
        }
        return;
      case '!':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          tok_ = {Tok::Ne, "!=", 0, tok_.line, tok_.col};
          return;
        }
        throw ParseError("stray '!'", tok_.line, tok_.col);
      case '>':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          tok_ = {Tok::Ge, ">=", 0, tok_.line, tok_.col};
        } else {
          tok_ = {Tok::Gt, ">", 0, tok_.line, tok_.col};
        }
        return;
      case '<':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          tok_ = {Tok::Le, "<=", 0, tok_.line, tok_.col};
        } else {
          tok_ = {Tok::Lt, "<", 0, tok_.line, tok_.col};
        }
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
  }

  void read_number(bool negative) {
    std::string digits;
    if (negative) digits = "-";
    bool saw_dot = false;
    while (pos_ < src_.size()) {
      char d = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(d))) {
        digits += d;
        advance();
      } else if (d == '.' && !saw_dot && pos_ + 1 < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        saw_dot = true;
        digits += d;
        advance();
      } else {
        break;
      }
    }
    tok_ = {Tok::Number, digits, std::stod(digits), tok_.line, tok_.col};
  }

  void one(Tok k) {
    tok_ = {k, std::string(1, src_[pos_]), 0, tok_.line, tok_.col};
    advance();
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

bool is_reserved(const std::string& id) {
  return id == "G" || id == "F" || id == "N" || id == "U" || id == "inf" ||
         id == "Trace" || id == "EXE";
}

// Operand of a comparison before type resolution.
struct Operand {
  enum class Kind { Signal, Number, Name } kind;
  SignalRef signal;
  double number = 0;
  std::string name;  // unresolved bare identifier (enum tag candidate)
  int line = 1, col = 1;
};

class Parser {
 public:
  Parser(std::string_view text, const SignalRegistry& registry)
      : lex_(text), registry_(registry) {}

  SpecFile parse_file() {
    SpecFile out;
    while (lex_.peek().kind != Tok::End) {
      statement(out);
    }
    if (out.law_name.empty()) {
      if (out.definitions.empty()) {
        throw ParseError("spec defines no law", 1, 1);
      }
      out.law_name = out.definitions.back().name;
    }
    return out;
  }

  Formula parse_single() {
    Formula f = formula();
    if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after formula");
    return f;
  }

 private:
  void statement(SpecFile& out) {
    Token head = expect(Tok::Ident, "identifier");
    // `Trace trace = EXE(scenario0);` -- accepted and ignored.
    if (head.text == "Trace") {
      while (lex_.peek().kind != Tok::Semi && lex_.peek().kind != Tok::End) lex_.take();
      expect(Tok::Semi, "';'");
      return;
    }
    if (lex_.peek().kind == Tok::Bind) {
      lex_.take();
      Token law = expect(Tok::Ident, "law name");
      if (!find_def(out, law.text)) {
        throw ParseError("undefined name '" + law.text + "'", law.line, law.col);
      }
      if (!out.law_name.empty() && out.law_name != law.text) {
        throw ParseError("multiple top-level laws bound", law.line, law.col);
      }
      out.law_name = law.text;
      expect(Tok::Semi, "';'");
      return;
    }
    expect(Tok::Assign, "'='");
    if (is_reserved(head.text)) {
      throw ParseError("reserved word '" + head.text + "' cannot be defined",
                       head.line, head.col);
    }
    if (find_def(out, head.text) || constants_.count(head.text)) {
      throw ParseError("duplicate definition '" + head.text + "'", head.line, head.col);
    }
    // Numeric constant definition: `d = 2;`
    if (lex_.peek().kind == Tok::Number) {
      Token num = lex_.take();
      if (lex_.peek().kind == Tok::Semi) {
        lex_.take();
        constants_[head.text] = num.number;
        out.constants.emplace_back(head.text, num.number);
        return;
      }
      lex_.fail("expected ';' after numeric constant");
    }
    defs_ = &out;
    Formula body = formula();
    defs_ = nullptr;
    expect(Tok::Semi, "';'");
    out.definitions.push_back({head.text, std::move(body)});
  }

  const Formula* find_def(const SpecFile& out, const std::string& name) const {
    return out.find(name);
  }

  Token expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind) {
      lex_.fail(std::string("expected ") + what);
    }
    return lex_.take();
  }

  // Precedence, loosest to tightest: ->, |, &, (U between unary operands),
  // unary (~ G F N), primary.
  Formula formula() { return implies_level(); }

  Formula implies_level() {
    Formula lhs = or_level();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.take();
      Formula rhs = implies_level();
      return make_implies(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula or_level() {
    Formula f = and_level();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      f = make_or(std::move(f), and_level());
    }
    return f;
  }

  Formula and_level() {
    Formula f = until_level();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      f = make_and(std::move(f), until_level());
    }
    return f;
  }

  Formula until_level() {
    Formula lhs = unary();
    if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "U") {
      lex_.take();
      Interval i = optional_interval();
      Formula rhs = unary();
      if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "U") {
        lex_.fail("chained 'U' needs parentheses");
      }
      return make_until(i, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Not) {
      lex_.take();
      return make_not(unary());
    }
    if (t.kind == Tok::Ident && (t.text == "G" || t.text == "F")) {
      bool always = t.text == "G";
      lex_.take();
      Interval i = optional_interval();
      Formula f = unary();
      return always ? make_always(i, std::move(f)) : make_eventually(i, std::move(f));
    }
    if (t.kind == Tok::Ident && t.text == "N") {
      lex_.take();
      return make_next(unary());
    }
    return primary();
  }

  Interval optional_interval() {
    if (lex_.peek().kind != Tok::LBracket) return Interval{};
    Token open = lex_.take();
    std::int64_t lo = interval_bound(false);
    expect(Tok::Comma, "','");
    std::int64_t hi = interval_bound(true);
    expect(Tok::RBracket, "']'");
    if (lo < 0 || hi < lo) {
      throw ParseError("malformed interval (lo > hi)", open.line, open.col);
    }
    return Interval{lo, hi};
  }

  std::int64_t interval_bound(bool allow_inf) {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Ident && t.text == "inf") {
      if (!allow_inf) lex_.fail("interval lower bound cannot be inf");
      lex_.take();
      return Interval::kUnbounded;
    }
    double v = 0;
    if (t.kind == Tok::Number) {
      v = lex_.take().number;
    } else if (t.kind == Tok::Ident && constants_.count(t.text)) {
      v = constants_.at(lex_.take().text);
    } else {
      lex_.fail("expected interval bound");
    }
    if (v < 0 || v != std::floor(v)) {
      throw ParseError("interval bounds must be non-negative integers (in trace steps)",
                       t.line, t.col);
    }
    return static_cast<std::int64_t>(v);
  }

  Formula primary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return maybe_comparison_of_formula(std::move(f));
    }
    if (t.kind == Tok::Ident || t.kind == Tok::Number) {
      Operand lhs = operand();
      if (is_cmp(lex_.peek().kind)) {
        CmpOp op = take_cmp();
        Operand rhs = operand();
        return make_atom(typed_comparison(lhs, op, rhs));
      }
      return operand_as_formula(lhs);
    }
    lex_.fail("expected formula");
  }

  // A parenthesized operand on the left of a comparison has already been
  // parsed as a formula; comparisons against formulas are rejected.
  Formula maybe_comparison_of_formula(Formula f) {
    if (is_cmp(lex_.peek().kind)) {
      lex_.fail("comparison operand must be a signal, number, or enum literal");
    }
    return f;
  }

  static bool is_cmp(Tok k) {
    return k == Tok::EqEq || k == Tok::Ne || k == Tok::Ge || k == Tok::Le ||
           k == Tok::Gt || k == Tok::Lt || k == Tok::Assign;
  }

  CmpOp take_cmp() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::EqEq: return CmpOp::Eq;
      case Tok::Assign:
        throw ParseError("use '==' for comparison", t.line, t.col);
      case Tok::Ne: return CmpOp::Ne;
      case Tok::Ge: return CmpOp::Ge;
      case Tok::Le: return CmpOp::Le;
      case Tok::Gt: return CmpOp::Gt;
      case Tok::Lt: return CmpOp::Lt;
      default: throw ParseError("expected comparison operator", t.line, t.col);
    }
  }

  Operand operand() {
    const Token& t = lex_.peek();
    Operand o;
    o.line = t.line;
    o.col = t.col;
    if (t.kind == Tok::Number) {
      o.kind = Operand::Kind::Number;
      o.number = lex_.take().number;
      return o;
    }
    Token id = expect(Tok::Ident, "identifier or number");
    if (constants_.count(id.text)) {
      o.kind = Operand::Kind::Number;
      o.number = constants_.at(id.text);
      return o;
    }
    if (const SignalInfo* info = registry_.find(id.text)) {
      o.kind = Operand::Kind::Signal;
      o.signal.base = id.text;
      if (lex_.peek().kind == Tok::LParen && (info->takes_distance || info->takes_side)) {
        lex_.take();
        if (info->takes_side) {
          Token side = expect(Tok::Ident, "'l' or 'r'");
          if (side.text != "l" && side.text != "r") {
            throw ParseError("expected 'l' or 'r'", side.line, side.col);
          }
          o.signal.side = side.text[0];
        } else {
          const Token& a = lex_.peek();
          if (a.kind == Tok::Number) {
            o.signal.arg = lex_.take().number;
          } else if (a.kind == Tok::Ident && constants_.count(a.text)) {
            o.signal.arg = constants_.at(lex_.take().text);
          } else {
            lex_.fail("expected numeric argument");
          }
        }
        expect(Tok::RParen, "')'");
      } else if (info->takes_distance) {
        throw ParseError("signal '" + id.text + "' needs a distance argument",
                         id.line, id.col);
      }
      return o;
    }
    // Not a constant or signal: either a defined formula name (handled by
    // operand_as_formula) or an enum literal (resolved against the other
    // comparison side).
    o.kind = Operand::Kind::Name;
    o.name = id.text;
    return o;
  }

  Formula operand_as_formula(const Operand& o) {
    switch (o.kind) {
      case Operand::Kind::Signal: {
        const SignalInfo* info = registry_.find(o.signal.base);
        if (info->kind != ValueKind::Boolean) {
          throw ParseError("signal '" + o.signal.base + "' is not Bool-typed",
                           o.line, o.col);
        }
        return make_atom(o.signal);
      }
      case Operand::Kind::Name: {
        if (defs_) {
          if (const Formula* f = defs_->find(o.name)) return *f;
        }
        throw ParseError("undefined name '" + o.name + "'", o.line, o.col);
      }
      case Operand::Kind::Number:
        throw ParseError("a number is not a formula", o.line, o.col);
    }
    throw ParseError("bad operand", o.line, o.col);
  }

  ValueKind operand_kind(const Operand& o) const {
    if (o.kind == Operand::Kind::Number) return ValueKind::Number;
    if (o.kind == Operand::Kind::Name) return ValueKind::Enum;
    const SignalInfo* info = registry_.find(o.signal.base);
    return info->kind;
  }

  BoolExpr typed_comparison(const Operand& lhs, CmpOp op, const Operand& rhs) {
    ValueKind lk = operand_kind(lhs);
    ValueKind rk = operand_kind(rhs);
    if (lk == ValueKind::Boolean || rk == ValueKind::Boolean) {
      throw ParseError("Bool signals cannot appear in comparisons", lhs.line, lhs.col);
    }
    if (lk != rk) {
      throw ParseError("type error: enum compared with number", lhs.line, lhs.col);
    }
    if (lk == ValueKind::Enum) {
      if (op != CmpOp::Eq && op != CmpOp::Ne) {
        throw ParseError("enum comparisons only use == and !=", lhs.line, lhs.col);
      }
      // Validate tags against the enum signal's domain.
      const Operand* sig = lhs.kind == Operand::Kind::Signal ? &lhs
                          : rhs.kind == Operand::Kind::Signal ? &rhs : nullptr;
      if (!sig) {
        throw ParseError("enum comparison needs an enum signal side", lhs.line, lhs.col);
      }
      const SignalInfo* info = registry_.find(sig->signal.base);
      for (const Operand* side : {&lhs, &rhs}) {
        if (side->kind == Operand::Kind::Name && !info->has_tag(side->name)) {
          throw ParseError("'" + side->name + "' is not a value of " + info->base,
                           side->line, side->col);
        }
      }
    }
    return Comparison{to_expr(lhs), op, to_expr(rhs)};
  }

  static Expr to_expr(const Operand& o) {
    switch (o.kind) {
      case Operand::Kind::Signal: return o.signal;
      case Operand::Kind::Number: return o.number;
      case Operand::Kind::Name: return EnumLit{o.name};
    }
    throw std::logic_error("bad operand");
  }

  Lexer lex_;
  const SignalRegistry& registry_;
  const SpecFile* defs_ = nullptr;
  std::map<std::string, double> constants_;
};

}  // namespace

SpecFile parse_spec(std::string_view text, const SignalRegistry& registry) {
  Parser p(text, registry);
  return p.parse_file();
}

Formula parse_formula(std::string_view text, const SignalRegistry& registry) {
  Parser p(text, registry);
  return p.parse_single();
}

}  // namespace lawfuzz
