#include <algorithm>
#include <cmath>
#include <limits>

#include "lawfuzz/microsim.hpp"
#include "lawfuzz/signal_eval.hpp"

namespace lawfuzz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double kmh(double mps) { return mps * 3.6; }

// Speed allowed by a braking profile that stops `standoff` metres before a
// point `dist` metres ahead, with comfort deceleration `decel`.
double stop_profile_kmh(double dist, double standoff, double decel) {
  double room = dist - standoff;
  if (room <= 0) return 0;
  return kmh(std::sqrt(2.0 * decel * room));
}

// What the driver sees, derived from the raw world state with the same
// geometry helpers the monitor uses.
struct View {
  double speed_kmh = 0;
  double d_stop = kInf;      // front bumper to stopline ahead
  double d_junction = kInf;  // front bumper to junction entry
  bool in_junction = false;
  bool past_stopline = false;
  bool has_light = false;
  LightColor light = LightColor::Black;
  bool blink = false;
  double gap = kInf;             // bumper gap to nearest blocker on our path
  double blocker_speed_kmh = 0;  // its speed
  bool zone_busy = false;        // crossing zone occupied or about to be
  bool priority_npc = false;
  bool priority_peds = false;
};

View observe(const WorldState& w) {
  View v;
  v.speed_kmh = w.ego.speed_kmh;

  FeatureAhead feats = features_ahead(w);
  v.d_stop = feats.stopline;
  v.d_junction = feats.junction;

  const MapContext& map = *w.map;
  const Lane* lane = map.find_lane(w.ego.lane_id);
  for (const auto& j : map.junctions) {
    if (point_in_polygon(j, w.ego.position)) v.in_junction = true;
  }
  double s_ego = polyline_station(lane->centerline, w.ego.position);

  // Stopline station on our route, for the crossing-zone window.
  double stop_station = kInf;
  if (v.d_stop < kInf) stop_station = s_ego + v.d_stop + kVehicleRadiusM;
  v.past_stopline = v.d_stop == kInf && (v.in_junction || v.d_junction < kInf);

  int head = map.head_index_for_lane(w.ego.lane_id);
  if (head >= 0 && !w.lights.empty()) {
    v.has_light = true;
    v.light = w.lights[head].color;
    v.blink = w.lights[head].blinking;
  }

  // Nearest blocker in the ego path corridor.
  auto consider = [&](Vec2 pos, double speed, double lateral_limit) {
    double s = polyline_station(lane->centerline, pos);
    double lateral = distance(pos, polyline_point(lane->centerline, s));
    if (lateral > lateral_limit) return;
    double gap = s - s_ego - 2 * kVehicleRadiusM;
    if (gap < -1.0) return;  // behind us
    if (gap < v.gap) {
      v.gap = gap;
      v.blocker_speed_kmh = speed;
    }
  };
  for (const auto& npc : w.npcs) consider(npc.position, npc.speed_kmh, 1.9);
  for (const auto& ped : w.pedestrians) consider(ped.position, kmh(ped.speed_mps), 1.6);
  for (const auto& ob : w.obstacles) consider(ob.position, 0.0, 1.9);

  // Crossing zone: from the stopline to a bit past the junction. Busy when
  // anything occupies our corridor there, or any agent is close enough to the
  // junction to reach it while we would be crossing.
  if (stop_station < kInf) {
    double zone_end = stop_station + 22.0;
    for (const auto& npc : w.npcs) {
      double s = polyline_station(lane->centerline, npc.position);
      double lateral = distance(npc.position, polyline_point(lane->centerline, s));
      if (lateral <= 1.9 && s > s_ego && s < zone_end && npc.speed_kmh < 8.0) {
        v.zone_busy = true;
      }
    }
    Vec2 zone_center = polyline_point(lane->centerline, stop_station + 8.0);
    for (const auto& npc : w.npcs) {
      if (npc.lane_id != w.ego.lane_id && npc.speed_kmh > 0.5 &&
          distance(npc.position, zone_center) < 28.0) {
        v.zone_busy = true;
      }
    }
    for (const auto& ped : w.pedestrians) {
      if (distance(ped.position, zone_center) < 18.0) v.zone_busy = true;
    }
  }

  v.priority_npc = priority_npc_ahead(w);
  v.priority_peds = priority_peds_ahead(w);
  return v;
}

double follow_speed_kmh(double gap, double stop_gap, double decel) {
  if (gap <= stop_gap) return 0;
  return kmh(std::sqrt(2.0 * decel * (gap - stop_gap)));
}

// Rule-abiding policy. Holds four metres short of a stopline whenever
// crossing is not clearly safe, so the near-stopline clauses of the signal
// laws never have a true antecedent while it waits; once committed past the
// line it keeps clearing the junction, stopping only when the light demands
// it and nudging forward when a yellow-in-junction clause demands motion.
class LawfulRun : public DriverRun {
 public:
  DriverControl step(const WorldState& w) override {
    View v = observe(w);
    DriverControl out;
    double target = kCruise;

    target = std::min(target, follow_speed_kmh(v.gap, 5.0, 2.5));

    bool committed = v.in_junction || v.past_stopline || v.d_stop <= 0.2;
    if (!committed && v.d_stop < kInf) {
      if (v.d_stop < 25.0) target = std::min(target, 18.0);
      if (v.blink && v.d_stop < 10.0) target = std::min(target, 15.0);

      bool can_stop =
          v.d_stop > mps(v.speed_kmh) * mps(v.speed_kmh) / (2 * kMaxAccelMps2) + 0.5;
      bool uncontrolled = !v.has_light;
      bool hold = false;
      if (uncontrolled) {
        hold = v.zone_busy || v.priority_npc || v.priority_peds;
      } else if (v.light == LightColor::Red) {
        hold = true;
      } else if (v.light == LightColor::Yellow) {
        if (can_stop) {
          hold = true;
        } else {
          yellow_stop_ = true;  // cannot make the line: stop even if past it
        }
      } else {  // green or dark
        hold = v.zone_busy || v.priority_npc || v.priority_peds;
      }
      if (hold) target = std::min(target, stop_profile_kmh(v.d_stop, 4.0, 2.5));
    }

    if (yellow_stop_) {
      target = 0;
      if (v.speed_kmh < 0.3) yellow_stop_ = false;
    } else if (committed) {
      double clear_speed = std::min(target, 18.0);
      if (!v.has_light) {
        target = clear_speed;
      } else if (v.light == LightColor::Red) {
        if (owe_move_ && v.speed_kmh < 0.5) {
          target = clear_speed;  // owed motion from a yellow step; one nudge
        } else {
          target = 0;
        }
      } else {
        target = clear_speed;
      }
    }

    // A yellow while stopped on or past the line demands motion shortly.
    owe_move_ = v.has_light && v.light == LightColor::Yellow && committed &&
                v.speed_kmh < 0.5;

    out.target_speed_kmh = target;
    if (w.ego.signals.direction != PlannedDirection::Forward && v.d_junction < 30.0) {
      out.turn_signal = w.ego.signals.direction == PlannedDirection::Left
                            ? TurnSignal::Left
                            : TurnSignal::Right;
    }
    return out;
  }

 private:
  static double mps(double kmh_v) { return kmh_v / 3.6; }
  static constexpr double kCruise = 40.0;
  bool yellow_stop_ = false;
  bool owe_move_ = false;
};

// Rushing policy: ignores yellow, runs red inside a seeded commit distance,
// brakes late, and disregards pedestrian priority with a seeded coin.
class AggressiveRun : public DriverRun {
 public:
  explicit AggressiveRun(std::uint64_t seed) {
    std::uint64_t h = splitmix64(seed ^ 0xa55a5aa5ULL);
    commit_dist_ = 6.0 + static_cast<double>(h % 9000) / 1000.0;  // 6..15 m
    ignore_peds_ = (splitmix64(seed ^ 0x77cc33ULL) % 100) < 60;
  }

  DriverControl step(const WorldState& w) override {
    View v = observe(w);
    DriverControl out;
    double target = kCruise;

    target = std::min(target, follow_speed_kmh(v.gap, 2.5, 3.8));

    bool committed = v.in_junction || v.past_stopline || v.d_stop <= 0.2;
    if (!committed && v.d_stop < kInf && v.has_light) {
      if (v.light == LightColor::Red && v.d_stop >= commit_dist_) {
        target = std::min(target, stop_profile_kmh(v.d_stop, 1.0, 3.8));
      }
      // Yellow is ignored entirely.
    }
    if (committed) {
      target = std::min(std::max(target, 30.0), follow_speed_kmh(v.gap, 2.5, 3.8));
    }
    if (!ignore_peds_ && v.priority_peds && !committed) {
      target = std::min(target, stop_profile_kmh(std::max(v.d_junction, 2.0), 1.5, 3.8));
    }
    out.target_speed_kmh = target;
    return out;
  }

 private:
  static constexpr double kCruise = 48.0;
  double commit_dist_ = 8.0;
  bool ignore_peds_ = true;
};

class LawfulDriver : public Driver {
 public:
  std::string name() const override { return "lawful"; }
  std::unique_ptr<DriverRun> start(std::uint64_t) const override {
    return std::make_unique<LawfulRun>();
  }
};

class AggressiveDriver : public Driver {
 public:
  std::string name() const override { return "aggressive"; }
  std::unique_ptr<DriverRun> start(std::uint64_t seed) const override {
    return std::make_unique<AggressiveRun>(seed);
  }
};

}  // namespace

const std::vector<std::shared_ptr<const Driver>>& builtin_drivers() {
  static const std::vector<std::shared_ptr<const Driver>> drivers = {
      std::make_shared<LawfulDriver>(),
      std::make_shared<AggressiveDriver>(),
  };
  return drivers;
}

std::shared_ptr<const Driver> find_driver(const std::string& name) {
  for (const auto& d : builtin_drivers()) {
    if (d->name() == name) return d;
  }
  throw std::invalid_argument("unknown driver '" + name + "'");
}

}  // namespace lawfuzz
