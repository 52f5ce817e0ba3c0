#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lawfuzz/formula.hpp"
#include "lawfuzz/signals.hpp"

namespace lawfuzz {

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(std::move(msg) + " (line " + std::to_string(line) +
                           ", col " + std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

// A parsed .lb file: named formula definitions (already resolved to closed
// formulas), named numeric constants, and the top-level law. The law is the
// target of a `trace |= name;` statement when present, otherwise the last
// formula definition in the file.
struct SpecFile {
  struct Definition {
    std::string name;
    Formula body;
  };

  std::vector<Definition> definitions;
  std::vector<std::pair<std::string, double>> constants;
  std::string law_name;

  Formula law() const;
  const Formula* find(const std::string& name) const;
};

SpecFile parse_spec(std::string_view text,
                    const SignalRegistry& registry = builtin_registry());

// Parses a single formula expression (no trailing ';'), with no named
// definitions in scope. Used by round-trip tests and report consumers.
Formula parse_formula(std::string_view text,
                      const SignalRegistry& registry = builtin_registry());

}  // namespace lawfuzz
