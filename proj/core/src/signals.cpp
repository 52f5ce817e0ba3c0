#include "lawfuzz/signals.hpp"

#include <algorithm>

namespace lawfuzz {

bool SignalInfo::has_tag(const std::string& tag) const {
  return std::find(enum_domain.begin(), enum_domain.end(), tag) != enum_domain.end();
}

void SignalRegistry::add(SignalInfo info) { infos_.push_back(std::move(info)); }

const SignalInfo* SignalRegistry::find(const std::string& base) const {
  for (const auto& i : infos_) {
    if (i.base == base) return &i;
  }
  return nullptr;
}

namespace {

SignalRegistry build_registry() {
  SignalRegistry r;
  auto num = [&](std::string name) {
    r.add({.base = std::move(name), .kind = ValueKind::Number});
  };
  auto boolean = [&](std::string name) {
    r.add({.base = std::move(name), .kind = ValueKind::Boolean});
  };
  auto bool_dist = [&](std::string name) {
    r.add({.base = std::move(name), .kind = ValueKind::Boolean, .takes_distance = true});
  };
  auto bool_side = [&](std::string name) {
    r.add({.base = std::move(name), .kind = ValueKind::Boolean, .takes_side = true});
  };
  auto enumerated = [&](std::string name, std::vector<std::string> domain) {
    r.add({.base = std::move(name), .kind = ValueKind::Enum,
           .enum_domain = std::move(domain)});
  };

  // Car status
  boolean("highBeamOn");
  boolean("lowBeamOn");
  enumerated("turnSignal", {"off", "left", "right"});
  boolean("fogLightOn");      // no backing state; always false
  boolean("hornOn");
  boolean("warningFlashOn");  // no backing state; always false
  enumerated("gear", {"NEUTRAL", "DRIVE", "REVERSE", "PARK", "LOW", "INVALID", "NONE"});
  boolean("engineOn");
  enumerated("direction", {"forward", "left", "right"});
  boolean("toManual");

  // Driving status
  num("speed");
  num("acc");
  num("brake");
  boolean("isChangingLane");
  boolean("isOverTaking");
  boolean("isTurningAround");

  // Road
  num("currentLane.number");
  enumerated("currentLane.side", {"left", "right"});
  enumerated("currentLane.direction", {"forward", "left", "right", "UTurn"});
  num("speedLimit.lowerLimit");
  num("speedLimit.upperLimit");
  boolean("streetLightOn");
  bool_dist("crosswalkAhead");
  bool_dist("junctionAhead");
  bool_dist("stoplineAhead");

  // Signals and signs
  bool_dist("stopSignAhead");    // no stop signs in bundled maps; always false
  bool_dist("noUTurnSignAhead"); // likewise
  enumerated("signalAhead", {"Common", "Arrow", "None"});
  enumerated("trafficLightAhead.color", {"red", "yellow", "green", "black"});
  boolean("trafficLightAhead.blink");

  // Traffic
  bool_side("PriorityNPCAhead");
  bool_side("PriorityPedsAhead");
  bool_dist("NPCAhead");
  bool_dist("NPCBack");
  bool_dist("NPCLeft");
  bool_dist("NPCRight");
  bool_dist("NearestNPC");
  bool_dist("nearestNPC");  // lowercase alias
  bool_dist("NPCOpposite");
  boolean("isTrafficJam");

  // Environment
  num("weather.rain");
  num("weather.fog");
  num("weather.snow");
  num("weather.visibility");
  num("time");

  return r;
}

}  // namespace

const SignalRegistry& builtin_registry() {
  static const SignalRegistry registry = build_registry();
  return registry;
}

}  // namespace lawfuzz
