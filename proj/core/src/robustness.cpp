#include "lawfuzz/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace lawfuzz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct EvaluatedExpr {
  ValueKind kind;
  double number = 0;
  std::string tag;
};

EvaluatedExpr eval_expr(const Expr& e, const Scene& scene) {
  if (const double* d = std::get_if<double>(&e)) {
    return {ValueKind::Number, *d, {}};
  }
  if (const EnumLit* lit = std::get_if<EnumLit>(&e)) {
    return {ValueKind::Enum, 0, lit->tag};
  }
  const auto& ref = std::get<SignalRef>(e);
  const Value& v = scene.get(ref.key());
  if (const double* d = std::get_if<double>(&v)) return {ValueKind::Number, *d, {}};
  if (const std::string* s = std::get_if<std::string>(&v)) return {ValueKind::Enum, 0, *s};
  throw std::invalid_argument("signal '" + ref.key() + "' is Bool-typed, not comparable");
}

}  // namespace

double atom_robustness(const BoolExpr& mu, const Scene& scene,
                       const RobustnessOptions& opts) {
  const double b = opts.bool_saturation;
  if (const SignalRef* ref = std::get_if<SignalRef>(&mu)) {
    const Value& v = scene.get(ref->key());
    const bool* flag = std::get_if<bool>(&v);
    if (!flag) {
      throw std::invalid_argument("signal '" + ref->key() + "' is not Bool-typed");
    }
    return *flag ? b : -b;
  }
  const auto& cmp = std::get<Comparison>(mu);
  EvaluatedExpr lhs = eval_expr(cmp.lhs, scene);
  EvaluatedExpr rhs = eval_expr(cmp.rhs, scene);
  if (lhs.kind != rhs.kind) {
    throw std::invalid_argument("comparison mixes enum and number");
  }
  if (lhs.kind == ValueKind::Enum) {
    bool equal = lhs.tag == rhs.tag;
    switch (cmp.op) {
      case CmpOp::Eq: return equal ? b : -b;
      case CmpOp::Ne: return equal ? -b : b;
      default:
        throw std::invalid_argument("enum comparison with ordering operator");
    }
  }
  switch (cmp.op) {
    case CmpOp::Gt:
    case CmpOp::Ge:
      return lhs.number - rhs.number;
    case CmpOp::Lt:
    case CmpOp::Le:
      return rhs.number - lhs.number;
    case CmpOp::Eq:
      return -std::abs(lhs.number - rhs.number);
    case CmpOp::Ne:
      return std::abs(lhs.number - rhs.number);
  }
  throw std::logic_error("atom_robustness: bad op");
}

namespace {

class Evaluator {
 public:
  Evaluator(const Trace& pi, const RobustnessOptions& opts) : pi_(pi), opts_(opts) {}

  const std::vector<double>& series(const Formula& f) {
    auto it = memo_.find(f.raw());
    if (it != memo_.end()) return it->second;
    std::vector<double> out = compute(f);
    return memo_.emplace(f.raw(), std::move(out)).first->second;
  }

 private:
  std::vector<double> compute(const Formula& f) {
    const std::int64_t n = static_cast<std::int64_t>(pi_.size()) - 1;
    std::vector<double> out(pi_.size());
    switch (f.op()) {
      case FormulaOp::Atom:
        for (std::int64_t t = 0; t <= n; ++t) {
          out[t] = atom_robustness(f.atom(), pi_.scenes[t], opts_);
        }
        return out;
      case FormulaOp::Not: {
        const auto& a = series(f.lhs());
        for (std::int64_t t = 0; t <= n; ++t) out[t] = -a[t];
        return out;
      }
      case FormulaOp::And: {
        const auto& a = series(f.lhs());
        const auto& b = series(f.rhs());
        for (std::int64_t t = 0; t <= n; ++t) out[t] = std::min(a[t], b[t]);
        return out;
      }
      case FormulaOp::Or: {
        const auto& a = series(f.lhs());
        const auto& b = series(f.rhs());
        for (std::int64_t t = 0; t <= n; ++t) out[t] = std::max(a[t], b[t]);
        return out;
      }
      case FormulaOp::Next: {
        const auto& a = series(f.lhs());
        for (std::int64_t t = 0; t <= n; ++t) out[t] = t + 1 <= n ? a[t + 1] : -kInf;
        return out;
      }
      case FormulaOp::Always: {
        const auto& a = series(f.lhs());
        for (std::int64_t t = 0; t <= n; ++t) {
          auto [lo, hi] = clip(f.interval(), t, n);
          double v = kInf;
          for (std::int64_t u = lo; u <= hi; ++u) v = std::min(v, a[u]);
          out[t] = v;
        }
        return out;
      }
      case FormulaOp::Eventually: {
        const auto& a = series(f.lhs());
        for (std::int64_t t = 0; t <= n; ++t) {
          auto [lo, hi] = clip(f.interval(), t, n);
          double v = -kInf;
          for (std::int64_t u = lo; u <= hi; ++u) v = std::max(v, a[u]);
          out[t] = v;
        }
        return out;
      }
      case FormulaOp::Until: {
        const auto& a = series(f.lhs());
        const auto& b = series(f.rhs());
        for (std::int64_t t = 0; t <= n; ++t) {
          auto [lo, hi] = clip(f.interval(), t, n);
          double best = -kInf;
          double run = kInf;  // inf of a over [t, u], inclusive
          for (std::int64_t u = t; u <= hi; ++u) {
            run = std::min(run, a[u]);
            if (u >= lo) best = std::max(best, std::min(b[u], run));
          }
          out[t] = best;
        }
        return out;
      }
      case FormulaOp::Implies:
        throw std::invalid_argument("rho: formula is not in core form (contains ->)");
    }
    throw std::logic_error("rho: bad op");
  }

  // (t + I) clipped to [0, n]; empty when lo > hi.
  static std::pair<std::int64_t, std::int64_t> clip(const Interval& i, std::int64_t t,
                                                    std::int64_t n) {
    std::int64_t lo = i.lo > n - t ? n + 1 : t + i.lo;
    std::int64_t hi = i.unbounded() || i.hi > n - t ? n : t + i.hi;
    return {lo, hi};
  }

  const Trace& pi_;
  const RobustnessOptions& opts_;
  std::unordered_map<const Formula::Node*, std::vector<double>> memo_;
};

}  // namespace

std::vector<double> rho_series(const Formula& f, const Trace& pi,
                               const RobustnessOptions& opts) {
  if (pi.empty()) throw std::invalid_argument("rho: empty trace");
  Evaluator ev(pi, opts);
  return ev.series(f);
}

double rho(const Formula& f, const Trace& pi, std::int64_t t,
           const RobustnessOptions& opts) {
  if (t < 0 || static_cast<std::size_t>(t) >= pi.size()) {
    throw std::out_of_range("rho: t outside trace");
  }
  return rho_series(f, pi, opts)[t];
}

bool satisfies(const Formula& f, const Trace& pi, const RobustnessOptions& opts) {
  return rho(f, pi, 0, opts) >= 0.0;
}

}  // namespace lawfuzz
