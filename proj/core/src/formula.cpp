#include "lawfuzz/formula.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace lawfuzz {

namespace {

std::string format_number(double v) {
  char buf[64];
  // %g keeps "2" as "2" and "3.5" as "3.5"; enough digits to round-trip the
  // literals that occur in specs.
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string SignalRef::key() const {
  std::string k = base;
  if (arg) {
    k += '(';
    k += format_number(*arg);
    k += ')';
  } else if (side) {
    k += '(';
    k += *side;
    k += ')';
  }
  return k;
}

const char* cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Gt: return ">";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Le: return "<=";
  }
  return "?";
}

Formula make_atom(BoolExpr e) {
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::Atom;
  n->atom = std::move(e);
  return Formula(std::move(n));
}

Formula make_not(Formula f) {
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::Not;
  n->lhs = std::move(f);
  return Formula(std::move(n));
}

Formula make_and(Formula a, Formula b) {
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::And;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula make_or(Formula a, Formula b) {
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::Or;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula make_implies(Formula a, Formula b) {
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::Implies;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula make_until(Interval i, Formula a, Formula b) {
  if (!i.valid()) throw std::invalid_argument("until: malformed interval");
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::Until;
  n->interval = i;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula make_always(Interval i, Formula f) {
  if (!i.valid()) throw std::invalid_argument("always: malformed interval");
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::Always;
  n->interval = i;
  n->lhs = std::move(f);
  return Formula(std::move(n));
}

Formula make_eventually(Interval i, Formula f) {
  if (!i.valid()) throw std::invalid_argument("eventually: malformed interval");
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::Eventually;
  n->interval = i;
  n->lhs = std::move(f);
  return Formula(std::move(n));
}

Formula make_next(Formula f) {
  auto n = std::make_shared<Formula::Node>();
  n->op = FormulaOp::Next;
  n->lhs = std::move(f);
  return Formula(std::move(n));
}

Formula negated(const Formula& f) {
  if (f.op() == FormulaOp::Not) return f.lhs();
  return make_not(f);
}

Formula eliminate_implications(const Formula& f) {
  switch (f.op()) {
    case FormulaOp::Atom:
      return f;
    case FormulaOp::Not:
      return make_not(eliminate_implications(f.lhs()));
    case FormulaOp::And:
      return make_and(eliminate_implications(f.lhs()), eliminate_implications(f.rhs()));
    case FormulaOp::Or:
      return make_or(eliminate_implications(f.lhs()), eliminate_implications(f.rhs()));
    case FormulaOp::Implies:
      return make_or(make_not(eliminate_implications(f.lhs())),
                     eliminate_implications(f.rhs()));
    case FormulaOp::Until:
      return make_until(f.interval(), eliminate_implications(f.lhs()),
                        eliminate_implications(f.rhs()));
    case FormulaOp::Always:
      return make_always(f.interval(), eliminate_implications(f.lhs()));
    case FormulaOp::Eventually:
      return make_eventually(f.interval(), eliminate_implications(f.lhs()));
    case FormulaOp::Next:
      return make_next(eliminate_implications(f.lhs()));
  }
  throw std::logic_error("eliminate_implications: bad op");
}

Formula remove_double_negation(const Formula& f) {
  switch (f.op()) {
    case FormulaOp::Atom:
      return f;
    case FormulaOp::Not: {
      Formula inner = remove_double_negation(f.lhs());
      if (inner.op() == FormulaOp::Not) return inner.lhs();
      return make_not(inner);
    }
    case FormulaOp::And:
      return make_and(remove_double_negation(f.lhs()), remove_double_negation(f.rhs()));
    case FormulaOp::Or:
      return make_or(remove_double_negation(f.lhs()), remove_double_negation(f.rhs()));
    case FormulaOp::Implies:
      return make_implies(remove_double_negation(f.lhs()), remove_double_negation(f.rhs()));
    case FormulaOp::Until:
      return make_until(f.interval(), remove_double_negation(f.lhs()),
                        remove_double_negation(f.rhs()));
    case FormulaOp::Always:
      return make_always(f.interval(), remove_double_negation(f.lhs()));
    case FormulaOp::Eventually:
      return make_eventually(f.interval(), remove_double_negation(f.lhs()));
    case FormulaOp::Next:
      return make_next(remove_double_negation(f.lhs()));
  }
  throw std::logic_error("remove_double_negation: bad op");
}

Formula normalize(const Formula& f) {
  return remove_double_negation(eliminate_implications(f));
}

bool is_core_form(const Formula& f) {
  switch (f.op()) {
    case FormulaOp::Atom:
      return true;
    case FormulaOp::Implies:
      return false;
    case FormulaOp::And:
    case FormulaOp::Or:
    case FormulaOp::Until:
      return is_core_form(f.lhs()) && is_core_form(f.rhs());
    case FormulaOp::Not:
    case FormulaOp::Always:
    case FormulaOp::Eventually:
    case FormulaOp::Next:
      return is_core_form(f.lhs());
  }
  return false;
}

bool same_tree(const Formula& a, const Formula& b) {
  if (a.raw() == b.raw()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case FormulaOp::Atom:
      return a.atom() == b.atom();
    case FormulaOp::Not:
    case FormulaOp::Next:
      return same_tree(a.lhs(), b.lhs());
    case FormulaOp::Always:
    case FormulaOp::Eventually:
      return a.interval() == b.interval() && same_tree(a.lhs(), b.lhs());
    case FormulaOp::Until:
      return a.interval() == b.interval() && same_tree(a.lhs(), b.lhs()) &&
             same_tree(a.rhs(), b.rhs());
    case FormulaOp::And:
    case FormulaOp::Or:
    case FormulaOp::Implies:
      return same_tree(a.lhs(), b.lhs()) && same_tree(a.rhs(), b.rhs());
  }
  return false;
}

bool structural_equal(const Formula& a, const Formula& b) {
  return same_tree(normalize(a), normalize(b));
}

namespace {

void collect_keys(const Expr& e, std::set<std::string>& out) {
  if (const auto* s = std::get_if<SignalRef>(&e)) out.insert(s->key());
}

void collect_keys(const Formula& f, std::set<std::string>& out) {
  if (f.op() == FormulaOp::Atom) {
    if (const auto* s = std::get_if<SignalRef>(&f.atom())) {
      out.insert(s->key());
    } else {
      const auto& c = std::get<Comparison>(f.atom());
      collect_keys(c.lhs, out);
      collect_keys(c.rhs, out);
    }
    return;
  }
  collect_keys(f.lhs(), out);
  if (f.op() == FormulaOp::And || f.op() == FormulaOp::Or ||
      f.op() == FormulaOp::Implies || f.op() == FormulaOp::Until) {
    collect_keys(f.rhs(), out);
  }
}

std::string render_expr(const Expr& e) {
  if (const auto* s = std::get_if<SignalRef>(&e)) return s->key();
  if (const auto* d = std::get_if<double>(&e)) return format_number(*d);
  return std::get<EnumLit>(e).tag;
}

std::string render_interval(const Interval& i) {
  if (i.unbounded() && i.lo == 0) return "";
  std::string s = "[" + std::to_string(i.lo) + ",";
  s += i.unbounded() ? "inf" : std::to_string(i.hi);
  s += "]";
  return s;
}

std::string body(const Formula& f);

std::string wrapped(const Formula& f) { return "(" + body(f) + ")"; }

std::string body(const Formula& f) {
  switch (f.op()) {
    case FormulaOp::Atom: {
      if (const auto* s = std::get_if<SignalRef>(&f.atom())) return s->key();
      const auto& c = std::get<Comparison>(f.atom());
      return render_expr(c.lhs) + " " + cmp_op_text(c.op) + " " + render_expr(c.rhs);
    }
    case FormulaOp::Not:
      return "~" + wrapped(f.lhs());
    case FormulaOp::And:
      return wrapped(f.lhs()) + " & " + wrapped(f.rhs());
    case FormulaOp::Or:
      return wrapped(f.lhs()) + " | " + wrapped(f.rhs());
    case FormulaOp::Implies:
      return wrapped(f.lhs()) + " -> " + wrapped(f.rhs());
    case FormulaOp::Until:
      return wrapped(f.lhs()) + " U" + render_interval(f.interval()) + " " + wrapped(f.rhs());
    case FormulaOp::Always:
      return "G" + render_interval(f.interval()) + " " + wrapped(f.lhs());
    case FormulaOp::Eventually:
      return "F" + render_interval(f.interval()) + " " + wrapped(f.lhs());
    case FormulaOp::Next:
      return "N " + wrapped(f.lhs());
  }
  throw std::logic_error("render: bad op");
}

}  // namespace

std::vector<std::string> signal_keys(const Formula& f) {
  std::set<std::string> keys;
  collect_keys(f, keys);
  return {keys.begin(), keys.end()};
}

std::string render_formula(const Formula& f) {
  if (f.op() == FormulaOp::Atom) return wrapped(f);
  return body(f);
}

}  // namespace lawfuzz
