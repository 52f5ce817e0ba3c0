#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lawfuzz/formula.hpp"
#include "lawfuzz/robustness.hpp"
#include "lawfuzz/trace.hpp"

namespace lawfuzz {

// Raised when an intermediate violation set outgrows the configured cap.
struct ThetaLimitError : std::runtime_error {
  ThetaLimitError(std::string subformula, std::size_t size, std::size_t cap)
      : std::runtime_error("violation set exceeds cap (" + std::to_string(size) + " > " +
                           std::to_string(cap) + ") at subformula " + subformula),
        subformula(std::move(subformula)),
        size(size) {}
  std::string subformula;
  std::size_t size;
};

// The distinct ways a law can be violated: satisfying any element falsifies
// the origin law. Elements are core-form, structurally deduplicated, in
// deterministic recursion order.
struct ViolationSet {
  std::vector<Formula> elements;
  Formula origin;

  std::size_t size() const { return elements.size(); }
};

inline constexpr std::size_t kDefaultThetaCap = 4096;

// Ways to violate f. Requires core form.
ViolationSet theta(const Formula& f, std::size_t max_size = kDefaultThetaCap);

// Ways to satisfy f (the dual set). Requires core form.
std::vector<Formula> n_set(const Formula& f, std::size_t max_size = kDefaultThetaCap);

struct CoverageState {
  std::set<std::size_t> covered;
  std::size_t total = 0;
};

// Marks every still-uncovered element with rho(element, pi, 0) >= 0 as
// covered; returns the new state and the newly covered indices.
std::pair<CoverageState, std::vector<std::size_t>> mark_covered(
    const CoverageState& state, const ViolationSet& theta_set, const Trace& pi,
    const RobustnessOptions& opts = {});

// |covered| / total; a degenerate empty set counts as fully covered (1.0)
// with a warning on stderr.
double coverage(const CoverageState& state);

}  // namespace lawfuzz
