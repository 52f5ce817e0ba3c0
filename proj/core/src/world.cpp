#include "lawfuzz/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lawfuzz {

double length(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(Vec2 a, Vec2 b) { return length(b - a); }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross_z(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

double polyline_length(const Polyline& line) {
  double total = 0;
  for (std::size_t i = 1; i < line.size(); ++i) total += distance(line[i - 1], line[i]);
  return total;
}

Vec2 polyline_point(const Polyline& line, double s) {
  if (line.empty()) throw std::invalid_argument("empty polyline");
  if (s <= 0) return line.front();
  for (std::size_t i = 1; i < line.size(); ++i) {
    double seg = distance(line[i - 1], line[i]);
    if (s <= seg && seg > 0) {
      double f = s / seg;
      return line[i - 1] + (line[i] - line[i - 1]) * f;
    }
    s -= seg;
  }
  return line.back();
}

Vec2 polyline_tangent(const Polyline& line, double s) {
  if (line.size() < 2) return {1, 0};
  double acc = 0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    double seg = distance(line[i - 1], line[i]);
    if ((s <= acc + seg && seg > 0) || i + 1 == line.size()) {
      Vec2 d = line[i] - line[i - 1];
      double len = length(d);
      return len > 0 ? d * (1.0 / len) : Vec2{1, 0};
    }
    acc += seg;
  }
  return {1, 0};
}

double polyline_station(const Polyline& line, Vec2 p) {
  double best_d = std::numeric_limits<double>::infinity();
  double best_s = 0;
  double acc = 0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    Vec2 a = line[i - 1];
    Vec2 b = line[i];
    double seg = distance(a, b);
    double t = 0;
    if (seg > 0) {
      t = std::clamp(dot(p - a, b - a) / (seg * seg), 0.0, 1.0);
    }
    Vec2 q = a + (b - a) * t;
    double d = distance(p, q);
    if (d < best_d) {
      best_d = d;
      best_s = acc + t * seg;
    }
    acc += seg;
  }
  return best_s;
}

bool point_in_polygon(const Polygon& poly, Vec2 p) {
  bool inside = false;
  std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    bool crosses = (poly[i].y > p.y) != (poly[j].y > p.y);
    if (crosses) {
      double x = poly[j].x + (poly[i].x - poly[j].x) * (p.y - poly[j].y) /
                                 (poly[i].y - poly[j].y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_polygon(const Polygon& poly, Vec2 p) {
  if (point_in_polygon(poly, p)) return 0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    Vec2 a = poly[j];
    Vec2 b = poly[i];
    double seg = distance(a, b);
    double t = seg > 0 ? std::clamp(dot(p - a, b - a) / (seg * seg), 0.0, 1.0) : 0;
    best = std::min(best, distance(p, a + (b - a) * t));
  }
  return best;
}

std::optional<double> segment_intersection(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  Vec2 r = b - a;
  Vec2 s = d - c;
  double denom = cross_z(r, s);
  if (std::abs(denom) < 1e-12) return std::nullopt;  // parallel
  double t = cross_z(c - a, s) / denom;
  double u = cross_z(c - a, r) / denom;
  if (t < 0 || t > 1 || u < 0 || u > 1) return std::nullopt;
  return t * length(r);
}

const Lane* MapContext::find_lane(const std::string& id) const {
  for (const auto& l : lanes) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

int MapContext::head_index_for_lane(const std::string& lane_id) const {
  for (std::size_t i = 0; i < signal_heads.size(); ++i) {
    if (signal_heads[i].governs_lane == lane_id) return static_cast<int>(i);
  }
  return -1;
}

const char* to_string(LightColor c) {
  switch (c) {
    case LightColor::Red: return "red";
    case LightColor::Yellow: return "yellow";
    case LightColor::Green: return "green";
    case LightColor::Black: return "black";
  }
  return "?";
}

const char* to_string(SignalKindTag k) {
  switch (k) {
    case SignalKindTag::Common: return "Common";
    case SignalKindTag::Arrow: return "Arrow";
    case SignalKindTag::None: return "None";
  }
  return "?";
}

const char* to_string(TurnSignal s) {
  switch (s) {
    case TurnSignal::Off: return "off";
    case TurnSignal::Left: return "left";
    case TurnSignal::Right: return "right";
  }
  return "?";
}

const char* to_string(PlannedDirection d) {
  switch (d) {
    case PlannedDirection::Forward: return "forward";
    case PlannedDirection::Left: return "left";
    case PlannedDirection::Right: return "right";
  }
  return "?";
}

const char* to_string(Gear g) {
  switch (g) {
    case Gear::Neutral: return "NEUTRAL";
    case Gear::Drive: return "DRIVE";
    case Gear::Reverse: return "REVERSE";
    case Gear::Park: return "PARK";
    case Gear::Low: return "LOW";
    case Gear::Invalid: return "INVALID";
    case Gear::None: return "NONE";
  }
  return "?";
}

const char* to_string(NpcType t) {
  switch (t) {
    case NpcType::Bus: return "bus";
    case NpcType::Car: return "car";
    case NpcType::PriorityVehicle: return "priorityVehicle";
  }
  return "?";
}

const char* to_string(LaneTurn t) {
  switch (t) {
    case LaneTurn::Forward: return "forward";
    case LaneTurn::Left: return "left";
    case LaneTurn::Right: return "right";
    case LaneTurn::UTurn: return "UTurn";
  }
  return "?";
}

const char* to_string(RoadSide s) {
  return s == RoadSide::Left ? "left" : "right";
}

NpcType npc_type_from_string(const std::string& s) {
  if (s == "bus") return NpcType::Bus;
  if (s == "car") return NpcType::Car;
  if (s == "priorityVehicle") return NpcType::PriorityVehicle;
  throw std::invalid_argument("unknown NPC type '" + s + "'");
}

namespace {

Vec2 vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("expected [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Polyline polyline_from_json(const nlohmann::json& j) {
  Polyline out;
  for (const auto& p : j) out.push_back(vec_from_json(p));
  return out;
}

LaneTurn lane_turn_from_string(const std::string& s) {
  if (s == "forward") return LaneTurn::Forward;
  if (s == "left") return LaneTurn::Left;
  if (s == "right") return LaneTurn::Right;
  if (s == "UTurn") return LaneTurn::UTurn;
  throw std::runtime_error("unknown lane direction '" + s + "'");
}

SignalKindTag signal_kind_from_string(const std::string& s) {
  if (s == "Common") return SignalKindTag::Common;
  if (s == "Arrow") return SignalKindTag::Arrow;
  if (s == "None") return SignalKindTag::None;
  throw std::runtime_error("unknown signal kind '" + s + "'");
}

}  // namespace

MapPtr parse_map_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  auto map = std::make_shared<MapContext>();
  for (const auto& lj : j.value("lanes", nlohmann::json::array())) {
    Lane lane;
    lane.id = lj.at("id").get<std::string>();
    lane.number = lj.value("number", 1);
    lane.side = lj.value("side", std::string("right")) == "left" ? RoadSide::Left
                                                                 : RoadSide::Right;
    lane.direction = lane_turn_from_string(lj.value("direction", std::string("forward")));
    lane.centerline = polyline_from_json(lj.at("centerline"));
    if (lane.centerline.size() < 2) {
      throw std::runtime_error("lane '" + lane.id + "' centerline needs >= 2 points");
    }
    if (lj.contains("speed_limit")) {
      lane.speed_limit_lower = lj["speed_limit"].value("lower", 0.0);
      lane.speed_limit_upper = lj["speed_limit"].value("upper", 120.0);
    }
    map->lanes.push_back(std::move(lane));
  }
  for (const auto& pj : j.value("junctions", nlohmann::json::array())) {
    map->junctions.push_back(polyline_from_json(pj));
  }
  for (const auto& sj : j.value("stoplines", nlohmann::json::array())) {
    map->stoplines.push_back({vec_from_json(sj[0]), vec_from_json(sj[1])});
  }
  for (const auto& cj : j.value("crosswalks", nlohmann::json::array())) {
    map->crosswalks.push_back(polyline_from_json(cj));
  }
  for (const auto& hj : j.value("signal_heads", nlohmann::json::array())) {
    SignalHead head;
    head.id = hj.at("id").get<std::string>();
    head.kind = signal_kind_from_string(hj.value("kind", std::string("Common")));
    head.governs_lane = hj.at("governs_lane").get<std::string>();
    head.blink_on_yellow = hj.value("blink_on_yellow", false);
    if (!map->find_lane(head.governs_lane)) {
      throw std::runtime_error("signal head '" + head.id + "' governs unknown lane '" +
                               head.governs_lane + "'");
    }
    map->signal_heads.push_back(std::move(head));
  }
  return map;
}

MapPtr load_map(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read map file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return parse_map_json(ss.str());
  } catch (const std::exception& e) {
    throw std::runtime_error("map '" + path + "': " + e.what());
  }
}

}  // namespace lawfuzz
