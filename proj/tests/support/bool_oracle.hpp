#pragma once

#include <cstdint>

#include "lawfuzz/formula.hpp"
#include "lawfuzz/trace.hpp"

namespace lawfuzz::testing {

// Independent Boolean evaluator implementing the recursive satisfaction
// definitions directly (exists/forall loops over clipped step intervals,
// closed until window). Deliberately separate from the robustness engine;
// used as the oracle in equivalence and soundness suites.
bool bool_sat(const Formula& f, const Trace& pi, std::int64_t t);

inline bool bool_sat(const Formula& f, const Trace& pi) { return bool_sat(f, pi, 0); }

}  // namespace lawfuzz::testing
