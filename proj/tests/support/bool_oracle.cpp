#include "support/bool_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

namespace lawfuzz::testing {

namespace {

struct Operand {
  bool is_number;
  double number = 0;
  std::string tag;
};

Operand eval_operand(const Expr& e, const Scene& scene) {
  if (const double* d = std::get_if<double>(&e)) return {true, *d, {}};
  if (const EnumLit* lit = std::get_if<EnumLit>(&e)) return {false, 0, lit->tag};
  const auto& ref = std::get<SignalRef>(e);
  const Value& v = scene.get(ref.key());
  if (const double* d = std::get_if<double>(&v)) return {true, *d, {}};
  if (const std::string* s = std::get_if<std::string>(&v)) return {false, 0, *s};
  throw std::invalid_argument("oracle: Bool signal in comparison");
}

bool atom_sat(const BoolExpr& mu, const Scene& scene) {
  if (const SignalRef* ref = std::get_if<SignalRef>(&mu)) {
    return std::get<bool>(scene.get(ref->key()));
  }
  const auto& cmp = std::get<Comparison>(mu);
  Operand lhs = eval_operand(cmp.lhs, scene);
  Operand rhs = eval_operand(cmp.rhs, scene);
  if (!lhs.is_number) {
    switch (cmp.op) {
      case CmpOp::Eq: return lhs.tag == rhs.tag;
      case CmpOp::Ne: return lhs.tag != rhs.tag;
      default: throw std::invalid_argument("oracle: ordered enum comparison");
    }
  }
  switch (cmp.op) {
    case CmpOp::Eq: return lhs.number == rhs.number;
    case CmpOp::Ne: return lhs.number != rhs.number;
    case CmpOp::Gt: return lhs.number > rhs.number;
    case CmpOp::Lt: return lhs.number < rhs.number;
    case CmpOp::Ge: return lhs.number >= rhs.number;
    case CmpOp::Le: return lhs.number <= rhs.number;
  }
  throw std::logic_error("oracle: bad op");
}

}  // namespace

bool bool_sat(const Formula& f, const Trace& pi, std::int64_t t) {
  const std::int64_t n = static_cast<std::int64_t>(pi.size()) - 1;
  switch (f.op()) {
    case FormulaOp::Atom:
      return atom_sat(f.atom(), pi.scenes[t]);
    case FormulaOp::Not:
      return !bool_sat(f.lhs(), pi, t);
    case FormulaOp::And:
      return bool_sat(f.lhs(), pi, t) && bool_sat(f.rhs(), pi, t);
    case FormulaOp::Or:
      return bool_sat(f.lhs(), pi, t) || bool_sat(f.rhs(), pi, t);
    case FormulaOp::Implies:
      return !bool_sat(f.lhs(), pi, t) || bool_sat(f.rhs(), pi, t);
    case FormulaOp::Next:
      return t + 1 <= n && bool_sat(f.lhs(), pi, t + 1);
    case FormulaOp::Eventually: {
      const Interval& i = f.interval();
      std::int64_t lo = i.lo > n - t ? n + 1 : t + i.lo;
      std::int64_t hi = i.unbounded() || i.hi > n - t ? n : t + i.hi;
      for (std::int64_t u = lo; u <= hi; ++u) {
        if (bool_sat(f.lhs(), pi, u)) return true;
      }
      return false;  // empty window included
    }
    case FormulaOp::Always: {
      const Interval& i = f.interval();
      std::int64_t lo = i.lo > n - t ? n + 1 : t + i.lo;
      std::int64_t hi = i.unbounded() || i.hi > n - t ? n : t + i.hi;
      for (std::int64_t u = lo; u <= hi; ++u) {
        if (!bool_sat(f.lhs(), pi, u)) return false;
      }
      return true;  // empty window included
    }
    case FormulaOp::Until: {
      const Interval& i = f.interval();
      std::int64_t lo = i.lo > n - t ? n + 1 : t + i.lo;
      std::int64_t hi = i.unbounded() || i.hi > n - t ? n : t + i.hi;
      for (std::int64_t u = lo; u <= hi; ++u) {
        if (!bool_sat(f.rhs(), pi, u)) continue;
        bool hold = true;
        for (std::int64_t v = t; v <= u; ++v) {  // closed window [t, u]
          if (!bool_sat(f.lhs(), pi, v)) {
            hold = false;
            break;
          }
        }
        if (hold) return true;
      }
      return false;
    }
  }
  throw std::logic_error("oracle: bad op");
}

}  // namespace lawfuzz::testing
