#pragma once

#include <string>
#include <vector>

#include "lawfuzz/formula.hpp"
#include "lawfuzz/rng.hpp"
#include "lawfuzz/trace.hpp"

namespace lawfuzz::testing {

// Random formulas over the Bool variables {a, b, c} with temporal operators
// up to the given depth; intervals are small or unbounded.
struct FormulaGenOptions {
  int max_depth = 3;
  bool allow_implies = false;
  bool allow_temporal = true;
};
Formula random_bool_formula(Rng& rng, const FormulaGenOptions& opts);

// Random formulas whose atoms compare the numeric signals {u, v} against
// small integer thresholds.
Formula random_numeric_formula(Rng& rng, int max_depth);

// Traces over the Bool scene variables {a, b, c}.
Trace random_bool_trace(Rng& rng, int len);
// All 8^len assignments for short lengths.
std::vector<Trace> all_bool_traces(int len);

// Traces assigning the numeric signals {u, v} small values.
Trace random_numeric_trace(Rng& rng, int len);

}  // namespace lawfuzz::testing
