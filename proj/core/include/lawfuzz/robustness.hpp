#pragma once

#include <cstdint>
#include <vector>

#include "lawfuzz/formula.hpp"
#include "lawfuzz/trace.hpp"

namespace lawfuzz {

struct RobustnessOptions {
  // Magnitude assigned to Bool signals and enum (in)equalities: +B when the
  // atom holds, -B when it does not.
  double bool_saturation = 1.0;
};

// Robustness of one atom against one scene. Numeric comparisons map to signed
// differences (>, >= : lhs-rhs; <, <= : rhs-lhs; == : -|lhs-rhs|;
// != : +|lhs-rhs|); Bool/enum atoms saturate at +-B.
double atom_robustness(const BoolExpr& mu, const Scene& scene,
                       const RobustnessOptions& opts = {});

// rho(f, pi, t) over the finite trace. Requires core form (no Implies) and
// 0 <= t < pi.size(). Intervals are clipped to the trace; an empty index set
// yields -inf for sup and +inf for inf; Next at the last step yields -inf.
double rho(const Formula& f, const Trace& pi, std::int64_t t,
           const RobustnessOptions& opts = {});

// rho at every start step, computed by dynamic programming over
// (subformula, t) pairs. Shared subtrees are evaluated once.
std::vector<double> rho_series(const Formula& f, const Trace& pi,
                               const RobustnessOptions& opts = {});

// The coverage criterion: rho(f, pi, 0) >= 0. Agreement with Boolean
// semantics is only guaranteed when rho != 0.
bool satisfies(const Formula& f, const Trace& pi, const RobustnessOptions& opts = {});

}  // namespace lawfuzz
