#include "lawfuzz/violation.hpp"

#include <functional>
#include <iostream>
#include <unordered_set>

namespace lawfuzz {

namespace {

using FormulaList = std::vector<Formula>;

// Deduplication key: rendering of the normalized tree. Stable and cheap
// compared with pairwise structural comparisons at large set sizes.
std::string dedup_key(const Formula& f) { return render_formula(normalize(f)); }

void dedup(FormulaList& v) {
  std::unordered_set<std::string> seen;
  FormulaList out;
  out.reserve(v.size());
  for (auto& f : v) {
    if (seen.insert(dedup_key(f)).second) out.push_back(std::move(f));
  }
  v = std::move(out);
}

class SetBuilder {
 public:
  explicit SetBuilder(std::size_t cap) : cap_(cap) {}

  FormulaList theta_of(const Formula& f) {
    require_core(f);
    FormulaList out;
    switch (f.op()) {
      case FormulaOp::Atom:
        out.push_back(make_not(f));
        break;
      case FormulaOp::And: {
        // Theta(a & b) = Theta(a) u Theta(b). (The two operands really are
        // a and b; see the duality axioms.)
        out = theta_of(f.lhs());
        FormulaList r = theta_of(f.rhs());
        out.insert(out.end(), r.begin(), r.end());
        break;
      }
      case FormulaOp::Or:
        out = cross(f, theta_of(f.lhs()), theta_of(f.rhs()),
                    [](Formula x, Formula y) { return make_and(std::move(x), std::move(y)); });
        break;
      case FormulaOp::Not:
        out = n_of(f.lhs());
        break;
      case FormulaOp::Always:
        out = map(theta_of(f.lhs()), [&](Formula x) {
          return make_eventually(f.interval(), std::move(x));
        });
        break;
      case FormulaOp::Eventually:
        out = map(theta_of(f.lhs()), [&](Formula x) {
          return make_always(f.interval(), std::move(x));
        });
        break;
      case FormulaOp::Until: {
        // {x U_I y | x in Theta(~a | b), y in Theta(a | b)}
        //   u {x & y | x in Theta(a), y in Theta(b)}
        Formula not_a_or_b = make_or(negated(f.lhs()), f.rhs());
        Formula a_or_b = make_or(f.lhs(), f.rhs());
        out = cross(f, theta_of(not_a_or_b), theta_of(a_or_b), [&](Formula x, Formula y) {
          return make_until(f.interval(), std::move(x), std::move(y));
        });
        FormulaList conj = cross(f, theta_of(f.lhs()), theta_of(f.rhs()),
                                 [](Formula x, Formula y) {
                                   return make_and(std::move(x), std::move(y));
                                 });
        out.insert(out.end(), conj.begin(), conj.end());
        break;
      }
      case FormulaOp::Next:
        out = map(theta_of(f.lhs()), [](Formula x) { return make_next(std::move(x)); });
        break;
      case FormulaOp::Implies:
        throw std::invalid_argument("theta: formula is not in core form (contains ->)");
    }
    dedup(out);
    check(out, f);
    return out;
  }

  FormulaList n_of(const Formula& f) {
    require_core(f);
    FormulaList out;
    switch (f.op()) {
      case FormulaOp::Atom:
        out.push_back(f);
        break;
      case FormulaOp::And:
        out = cross(f, n_of(f.lhs()), n_of(f.rhs()),
                    [](Formula x, Formula y) { return make_and(std::move(x), std::move(y)); });
        break;
      case FormulaOp::Or: {
        out = n_of(f.lhs());
        FormulaList r = n_of(f.rhs());
        out.insert(out.end(), r.begin(), r.end());
        break;
      }
      case FormulaOp::Not:
        out = theta_of(f.lhs());
        break;
      case FormulaOp::Always:
        out = map(n_of(f.lhs()), [&](Formula x) {
          return make_always(f.interval(), std::move(x));
        });
        break;
      case FormulaOp::Eventually:
        out = map(n_of(f.lhs()), [&](Formula x) {
          return make_eventually(f.interval(), std::move(x));
        });
        break;
      case FormulaOp::Until:
        out = cross(f, n_of(f.lhs()), n_of(f.rhs()), [&](Formula x, Formula y) {
          return make_until(f.interval(), std::move(x), std::move(y));
        });
        break;
      case FormulaOp::Next:
        out = map(n_of(f.lhs()), [](Formula x) { return make_next(std::move(x)); });
        break;
      case FormulaOp::Implies:
        throw std::invalid_argument("n_set: formula is not in core form (contains ->)");
    }
    dedup(out);
    check(out, f);
    return out;
  }

 private:
  static void require_core(const Formula& f) {
    if (!f.valid()) throw std::invalid_argument("theta/n_set: empty formula");
  }

  template <typename Fn>
  static FormulaList map(const FormulaList& in, Fn&& fn) {
    FormulaList out;
    out.reserve(in.size());
    for (const auto& f : in) out.push_back(fn(f));
    return out;
  }

  template <typename Fn>
  FormulaList cross(const Formula& at, const FormulaList& a, const FormulaList& b,
                    Fn&& fn) {
    if (a.size() * b.size() > cap_) {
      throw ThetaLimitError(render_formula(at), a.size() * b.size(), cap_);
    }
    FormulaList out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
      for (const auto& y : b) out.push_back(fn(x, y));
    }
    return out;
  }

  void check(const FormulaList& out, const Formula& at) const {
    if (out.size() > cap_) {
      throw ThetaLimitError(render_formula(at), out.size(), cap_);
    }
  }

  std::size_t cap_;
};

}  // namespace

ViolationSet theta(const Formula& f, std::size_t max_size) {
  SetBuilder b(max_size);
  ViolationSet out;
  out.origin = f;
  out.elements = b.theta_of(f);
  return out;
}

std::vector<Formula> n_set(const Formula& f, std::size_t max_size) {
  SetBuilder b(max_size);
  return b.n_of(f);
}

std::pair<CoverageState, std::vector<std::size_t>> mark_covered(
    const CoverageState& state, const ViolationSet& theta_set, const Trace& pi,
    const RobustnessOptions& opts) {
  CoverageState next = state;
  next.total = theta_set.size();
  std::vector<std::size_t> newly;
  for (std::size_t i = 0; i < theta_set.elements.size(); ++i) {
    if (next.covered.count(i)) continue;
    if (rho(theta_set.elements[i], pi, 0, opts) >= 0.0) {
      next.covered.insert(i);
      newly.push_back(i);
    }
  }
  return {std::move(next), std::move(newly)};
}

double coverage(const CoverageState& state) {
  if (state.total == 0) {
    std::cerr << "warning: empty violation set, coverage defined as 1.0\n";
    return 1.0;
  }
  return static_cast<double>(state.covered.size()) / static_cast<double>(state.total);
}

}  // namespace lawfuzz
