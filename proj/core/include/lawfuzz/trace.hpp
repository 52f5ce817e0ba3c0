#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace lawfuzz {

// A scene value: Bool flag, number, or enum tag. Booleans and enums are never
// silently coerced to numbers.
using Value = std::variant<bool, double, std::string>;

// Valuation of all needed signal keys at one time step.
struct Scene {
  std::map<std::string, Value> signals;

  const Value& get(const std::string& key) const;
  const Value* try_get(const std::string& key) const;
};

// Ordered sequence of scenes with uniform time-step spacing.
struct Trace {
  std::vector<Scene> scenes;

  std::size_t size() const { return scenes.size(); }
  bool empty() const { return scenes.empty(); }
  const Scene& at(std::size_t t) const { return scenes.at(t); }
};

// JSON Lines serialization, one scene per line:
//   {"t": 0, "signals": {"speed": 12.5, "hornOn": false, ...}}
void write_trace_jsonl(const Trace& trace, std::ostream& os);
Trace read_trace_jsonl(std::istream& is);

void save_trace_jsonl(const Trace& trace, const std::string& path);
Trace load_trace_jsonl(const std::string& path);

}  // namespace lawfuzz
