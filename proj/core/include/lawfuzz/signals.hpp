#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lawfuzz {

enum class ValueKind { Number, Boolean, Enum };

// One registered signal name pattern: value kind, whether it takes a numeric
// distance argument like stoplineAhead(n), whether it accepts an optional
// driver-side argument like PriorityNPCAhead(l), and the enum domain.
struct SignalInfo {
  std::string base;
  ValueKind kind = ValueKind::Boolean;
  bool takes_distance = false;
  bool takes_side = false;
  std::vector<std::string> enum_domain;

  bool has_tag(const std::string& tag) const;
};

class SignalRegistry {
 public:
  void add(SignalInfo info);
  const SignalInfo* find(const std::string& base) const;
  const std::vector<SignalInfo>& all() const { return infos_; }

 private:
  std::vector<SignalInfo> infos_;
};

// The driver-oriented signal vocabulary of the law language. Covers car and
// driving status, road and signal lookahead, traffic (NPC/pedestrian)
// relations, and environment variables.
const SignalRegistry& builtin_registry();

}  // namespace lawfuzz
