#include "lawfuzz/signal_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lawfuzz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

struct ParsedKey {
  std::string base;
  std::optional<double> arg;
  std::optional<char> side;
};

ParsedKey parse_key(const std::string& key) {
  auto open = key.find('(');
  if (open == std::string::npos) return {key, std::nullopt, std::nullopt};
  if (key.back() != ')') throw std::invalid_argument("malformed signal key '" + key + "'");
  ParsedKey out;
  out.base = key.substr(0, open);
  std::string inner = key.substr(open + 1, key.size() - open - 2);
  if (inner == "l" || inner == "r") {
    out.side = inner[0];
  } else {
    out.arg = std::stod(inner);
  }
  return out;
}

// Per-step evaluation context shared between signal lookups.
struct EvalContext {
  const WorldState& w;
  const SignalParams& p;
  const Lane* lane = nullptr;
  Polyline path;          // lane centerline re-rooted slightly behind the ego
  double back_offset = 0; // arclength of ego center from path start
  bool ego_in_junction = false;
  int head_index = -1;

  EvalContext(const WorldState& w, const SignalParams& p) : w(w), p(p) {
    if (!w.map) throw std::invalid_argument("WorldState has no map");
    lane = w.map->find_lane(w.ego.lane_id);
    if (!lane) {
      throw std::invalid_argument("ego lane '" + w.ego.lane_id + "' not in map");
    }
    double s0 = polyline_station(lane->centerline, w.ego.position);
    double back = p.ego_radius_m + 0.5;
    double begin = std::max(0.0, s0 - back);
    back_offset = s0 - begin;
    path.push_back(polyline_point(lane->centerline, begin));
    double acc = 0;
    for (std::size_t i = 1; i < lane->centerline.size(); ++i) {
      double seg = distance(lane->centerline[i - 1], lane->centerline[i]);
      if (acc + seg > begin) path.push_back(lane->centerline[i]);
      acc += seg;
    }
    if (path.size() < 2) path.push_back(lane->centerline.back());
    for (const auto& j : w.map->junctions) {
      if (point_in_polygon(j, w.ego.position)) {
        ego_in_junction = true;
        break;
      }
    }
    head_index = w.map->head_index_for_lane(lane->id);
  }

  // Arclength from the ego center to the first crossing of the segment by
  // the forward path (may be slightly negative while straddling).
  double distance_to_segment(const Segment& seg) const {
    double acc = 0;
    double best = kInf;
    for (std::size_t i = 1; i < path.size(); ++i) {
      auto hit = segment_intersection(path[i - 1], path[i], seg.a, seg.b);
      if (hit) best = std::min(best, acc + *hit - back_offset);
      acc += distance(path[i - 1], path[i]);
    }
    return best;
  }

  double distance_to_polygon_entry(const Polygon& poly) const {
    if (point_in_polygon(poly, w.ego.position)) return 0;
    double acc = 0;
    double best = kInf;
    std::size_t n = poly.size();
    for (std::size_t i = 1; i < path.size(); ++i) {
      for (std::size_t e = 0, f = n - 1; e < n; f = e++) {
        auto hit = segment_intersection(path[i - 1], path[i], poly[f], poly[e]);
        if (hit) best = std::min(best, acc + *hit - back_offset);
      }
      acc += distance(path[i - 1], path[i]);
    }
    return best;
  }

  // Feature distance -> Bool "within n metres ahead", measured at the front
  // bumper, true also while the feature is under the vehicle.
  bool within_ahead(double center_dist, double n) const {
    return center_dist >= -p.ego_radius_m && center_dist <= n + p.ego_radius_m;
  }

  double nearest_stopline() const {
    double best = kInf;
    for (const auto& s : w.map->stoplines) best = std::min(best, distance_to_segment(s));
    return best;
  }

  double nearest_junction() const {
    double best = kInf;
    for (const auto& j : w.map->junctions) {
      best = std::min(best, distance_to_polygon_entry(j));
    }
    return best;
  }

  double nearest_crosswalk() const {
    double best = kInf;
    for (const auto& c : w.map->crosswalks) {
      best = std::min(best, distance_to_polygon_entry(c));
    }
    return best;
  }

  // Position of `pos` in the ego frame: x forward, y left.
  Vec2 ego_frame(Vec2 pos) const {
    Vec2 d = pos - w.ego.position;
    double c = std::cos(w.ego.heading);
    double s = std::sin(w.ego.heading);
    return {c * d.x + s * d.y, -s * d.x + c * d.y};
  }

  double bearing_deg(Vec2 pos) const {
    Vec2 f = ego_frame(pos);
    return std::atan2(f.y, f.x) * 180.0 / kPi;
  }

  bool in_sector(const NpcState& npc, double center_deg, double max_dist) const {
    if (distance(npc.position, w.ego.position) > max_dist) return false;
    double b = bearing_deg(npc.position);
    double rel = std::abs(std::remainder(b - center_deg, 360.0));
    return rel <= p.sector_half_angle_deg;
  }

  bool in_area_ahead(Vec2 pos, double depth) const {
    Vec2 f = ego_frame(pos);
    return f.x >= p.ego_radius_m && f.x <= p.ego_radius_m + depth &&
           std::abs(f.y) <= p.lane_width_m / 2;
  }

  LightState light() const {
    if (head_index < 0) return {LightColor::Black, false};
    return w.lights.at(head_index);
  }

  SignalKindTag signal_kind() const {
    if (head_index < 0) return SignalKindTag::None;
    return w.map->signal_heads[head_index].kind;
  }

  int current_lane_number() const { return ego_in_junction ? 0 : lane->number; }
};

bool npc_opposite(const EvalContext& ctx, const NpcState& npc, double max_dist) {
  if (distance(npc.position, ctx.w.ego.position) > max_dist) return false;
  double rel = std::abs(std::remainder(npc.heading - ctx.w.ego.heading, 2 * kPi));
  return rel > 3 * kPi / 4;
}

bool is_traffic_jam(const EvalContext& ctx) {
  int count = 0;
  for (const auto& npc : ctx.w.npcs) {
    if (ctx.in_sector(npc, 0.0, ctx.p.jam_within_m) &&
        npc.speed_kmh < ctx.p.jam_speed_kmh) {
      ++count;
    }
  }
  return count >= ctx.p.jam_min_npcs;
}

bool priority_npc_ahead_impl(const EvalContext& ctx, char driver_side) {
  const auto& w = ctx.w;
  const auto& p = ctx.p;
  bool junction_context =
      ctx.ego_in_junction || ctx.nearest_junction() <= p.junction_near_m;
  bool uncontrolled = ctx.head_index < 0;
  bool ego_turning = w.ego.signals.direction != PlannedDirection::Forward;

  const Polygon* junction_ahead = nullptr;
  if (junction_context) {
    double best = kInf;
    for (const auto& j : w.map->junctions) {
      double d = point_in_polygon(j, w.ego.position) ? 0 : ctx.distance_to_polygon_entry(j);
      if (d < best) {
        best = d;
        junction_ahead = &j;
      }
    }
  }

  for (const auto& npc : w.npcs) {
    if (!ctx.in_area_ahead(npc.position, p.npc_area_ahead_m)) continue;
    // (a) emergency/priority vehicle class
    if (npc.type == NpcType::PriorityVehicle) return true;
    // (b) going straight through the junction the ego is turning into
    if (ego_turning && junction_ahead && npc.direction == PlannedDirection::Forward &&
        point_in_polygon(*junction_ahead, npc.position)) {
      return true;
    }
    // (c) approaching from the driver side at an uncontrolled junction
    if (uncontrolled && junction_context && npc.speed_kmh > 0.5) {
      Vec2 f = ctx.ego_frame(npc.position);
      double rel = std::remainder(npc.heading - w.ego.heading, 2 * kPi);
      bool transverse = std::abs(std::sin(rel)) > std::sin(kPi / 4);
      if (transverse) {
        // Side the NPC came from: lateral offset, or travel direction when
        // it is already crossing the centerline.
        bool from_left = f.y > 0.3 || (std::abs(f.y) <= 0.3 && std::sin(rel) < 0);
        if ((driver_side == 'l') == from_left) return true;
      }
    }
  }
  return false;
}

bool priority_peds_ahead_impl(const EvalContext& ctx) {
  const auto& w = ctx.w;
  for (const auto& ped : w.pedestrians) {
    if (!ctx.in_area_ahead(ped.position, ctx.p.ped_area_ahead_m)) continue;
    for (const auto& cw : w.map->crosswalks) {
      if (distance_to_polygon(cw, ped.position) <= ctx.p.crosswalk_near_m) return true;
    }
  }
  return false;
}

Value evaluate_key(const EvalContext& ctx, const std::string& key) {
  const auto& w = ctx.w;
  ParsedKey k = parse_key(key);
  const std::string& b = k.base;

  // Car status
  if (b == "highBeamOn") return w.ego.signals.high_beam_on;
  if (b == "lowBeamOn") return w.ego.signals.low_beam_on;
  if (b == "turnSignal") return std::string(to_string(w.ego.signals.turn_signal));
  if (b == "fogLightOn") return false;
  if (b == "hornOn") return w.ego.signals.horn_on;
  if (b == "warningFlashOn") return false;
  if (b == "gear") return std::string(to_string(w.ego.signals.gear));
  if (b == "engineOn") return w.ego.signals.engine_on;
  if (b == "direction") return std::string(to_string(w.ego.signals.direction));
  if (b == "toManual") return w.ego.signals.to_manual;

  // Driving status
  if (b == "speed") return w.ego.speed_kmh;
  if (b == "acc") return w.ego.acc_mps2;
  if (b == "brake") return w.ego.signals.brake_pct;
  if (b == "isChangingLane") return w.ego.signals.is_changing_lane;
  if (b == "isOverTaking") return w.ego.signals.is_over_taking;
  if (b == "isTurningAround") return w.ego.signals.is_turning_around;

  // Road
  if (b == "currentLane.number") return static_cast<double>(ctx.current_lane_number());
  if (b == "currentLane.side") return std::string(to_string(ctx.lane->side));
  if (b == "currentLane.direction") return std::string(to_string(ctx.lane->direction));
  if (b == "speedLimit.lowerLimit") return ctx.lane->speed_limit_lower;
  if (b == "speedLimit.upperLimit") return ctx.lane->speed_limit_upper;
  if (b == "streetLightOn") return w.env.street_light_on;
  if (b == "crosswalkAhead") return ctx.within_ahead(ctx.nearest_crosswalk(), *k.arg);
  if (b == "junctionAhead") return ctx.within_ahead(ctx.nearest_junction(), *k.arg);
  if (b == "stoplineAhead") return ctx.within_ahead(ctx.nearest_stopline(), *k.arg);

  // Signs and signals
  if (b == "stopSignAhead") return false;
  if (b == "noUTurnSignAhead") return false;
  if (b == "signalAhead") return std::string(to_string(ctx.signal_kind()));
  if (b == "trafficLightAhead.color") return std::string(to_string(ctx.light().color));
  if (b == "trafficLightAhead.blink") return ctx.light().blinking;

  // Traffic
  if (b == "PriorityNPCAhead") {
    return priority_npc_ahead_impl(ctx, k.side.value_or(ctx.p.default_driver_side));
  }
  if (b == "PriorityPedsAhead") return priority_peds_ahead_impl(ctx);
  if (b == "NPCAhead" || b == "NPCBack" || b == "NPCLeft" || b == "NPCRight") {
    double center = b == "NPCAhead" ? 0.0 : b == "NPCBack" ? 180.0
                   : b == "NPCLeft" ? 90.0 : -90.0;
    for (const auto& npc : w.npcs) {
      if (ctx.in_sector(npc, center, *k.arg)) return true;
    }
    return false;
  }
  if (b == "NearestNPC" || b == "nearestNPC") {
    for (const auto& npc : w.npcs) {
      if (distance(npc.position, w.ego.position) <= *k.arg) return true;
    }
    return false;
  }
  if (b == "NPCOpposite") {
    for (const auto& npc : w.npcs) {
      if (npc_opposite(ctx, npc, *k.arg)) return true;
    }
    return false;
  }
  if (b == "isTrafficJam") return is_traffic_jam(ctx);

  // Environment
  if (b == "weather.rain") return w.env.rain;
  if (b == "weather.fog") return w.env.fog;
  if (b == "weather.snow") return w.env.snow;
  if (b == "weather.visibility") return w.env.visibility_m;
  if (b == "time") return w.env.time_of_day_min;

  throw std::invalid_argument("unknown signal key '" + key + "'");
}

}  // namespace

FeatureAhead features_ahead(const WorldState& w, const SignalParams& p) {
  EvalContext ctx(w, p);
  double r = p.ego_radius_m;
  return {ctx.nearest_stopline() - r, ctx.nearest_junction() - r,
          ctx.nearest_crosswalk() - r};
}

bool priority_peds_ahead(const WorldState& w, const SignalParams& p) {
  EvalContext ctx(w, p);
  return priority_peds_ahead_impl(ctx);
}

bool priority_npc_ahead(const WorldState& w, char driver_side, const SignalParams& p) {
  EvalContext ctx(w, p);
  return priority_npc_ahead_impl(ctx, driver_side);
}

Scene evaluate_signals(const WorldState& w, const std::set<std::string>& needed,
                       const SignalParams& p) {
  EvalContext ctx(w, p);
  Scene scene;
  for (const auto& key : needed) {
    scene.signals.emplace(key, evaluate_key(ctx, key));
  }
  return scene;
}

Trace trace_from_states(std::span<const WorldState> states,
                        const std::set<std::string>& needed, const SignalParams& p) {
  if (states.empty()) throw std::invalid_argument("trace_from_states: no states");
  Trace out;
  out.scenes.reserve(states.size());
  for (const auto& w : states) out.scenes.push_back(evaluate_signals(w, needed, p));
  return out;
}

}  // namespace lawfuzz
