#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lawfuzz {

// Trace-step interval attached to temporal operators. An absent interval in
// the surface syntax means [0, +inf); +inf is represented by kUnbounded.
struct Interval {
  static constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

  std::int64_t lo = 0;
  std::int64_t hi = kUnbounded;

  bool unbounded() const { return hi == kUnbounded; }
  bool valid() const { return lo >= 0 && lo <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Reference to a registered scene signal: plain ("speed"), dotted
// ("trafficLightAhead.color"), distance-parameterized ("stoplineAhead(2)"),
// or side-parameterized ("PriorityNPCAhead(r)").
struct SignalRef {
  std::string base;
  std::optional<double> arg;
  std::optional<char> side;  // 'l' or 'r'

  // Canonical key used in Scene valuations, e.g. "stoplineAhead(2)".
  std::string key() const;

  friend bool operator==(const SignalRef&, const SignalRef&) = default;
};

enum class CmpOp { Eq, Ne, Gt, Lt, Ge, Le };

const char* cmp_op_text(CmpOp op);

struct EnumLit {
  std::string tag;
  friend bool operator==(const EnumLit&, const EnumLit&) = default;
};

using Expr = std::variant<SignalRef, double, EnumLit>;

struct Comparison {
  Expr lhs;
  CmpOp op;
  Expr rhs;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

// An atom is a Bool-typed signal used directly, or a comparison.
using BoolExpr = std::variant<SignalRef, Comparison>;

enum class FormulaOp { Atom, Not, And, Or, Implies, Until, Always, Eventually, Next };

// Immutable formula tree. Copies share structure; nodes are never mutated
// after construction, so formulas are safe to share across threads.
class Formula {
 public:
  struct Node {
    FormulaOp op;
    BoolExpr atom;      // Atom only
    Interval interval;  // Until / Always / Eventually only
    Formula lhs;        // first child of any non-atom
    Formula rhs;        // second child of And / Or / Implies / Until
  };

  Formula() = default;

  bool valid() const { return node_ != nullptr; }
  FormulaOp op() const { return node_->op; }
  const BoolExpr& atom() const { return node_->atom; }
  const Interval& interval() const { return node_->interval; }
  const Formula& lhs() const { return node_->lhs; }
  const Formula& rhs() const { return node_->rhs; }
  const Node* raw() const { return node_.get(); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend Formula make_atom(BoolExpr e);
  friend Formula make_not(Formula f);
  friend Formula make_and(Formula a, Formula b);
  friend Formula make_or(Formula a, Formula b);
  friend Formula make_implies(Formula a, Formula b);
  friend Formula make_until(Interval i, Formula a, Formula b);
  friend Formula make_always(Interval i, Formula f);
  friend Formula make_eventually(Interval i, Formula f);
  friend Formula make_next(Formula f);
};

Formula make_atom(BoolExpr e);
Formula make_not(Formula f);
Formula make_and(Formula a, Formula b);
Formula make_or(Formula a, Formula b);
Formula make_implies(Formula a, Formula b);
Formula make_until(Interval i, Formula a, Formula b);
Formula make_always(Interval i, Formula f);
Formula make_eventually(Interval i, Formula f);
Formula make_next(Formula f);

// Negation that collapses a leading Not instead of stacking ~~f.
Formula negated(const Formula& f);

// Rewrites every (a -> b) into (~a | b); no other structure changes.
Formula eliminate_implications(const Formula& f);

// Collapses ~~f into f, recursively.
Formula remove_double_negation(const Formula& f);

// eliminate_implications followed by remove_double_negation. The result is
// "core form": no Implies node, no stacked negations.
Formula normalize(const Formula& f);

bool is_core_form(const Formula& f);

// Exact tree equality (same ops, intervals, atoms), no normalization.
bool same_tree(const Formula& a, const Formula& b);

// Equality modulo normalization; the equality used for violation-set
// membership. No commutative or associative rewriting.
bool structural_equal(const Formula& a, const Formula& b);

// Scene keys referenced by the formula, sorted and deduplicated.
std::vector<std::string> signal_keys(const Formula& f);

// Fixed, re-parseable rendering: comparisons self-parenthesize, operators
// parenthesize their operands, e.g. `F ((a) & (~(c)))`.
std::string render_formula(const Formula& f);

}  // namespace lawfuzz
