#include "lawfuzz/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lawfuzz {

namespace {

PlannedDirection direction_from_string(const std::string& s) {
  if (s == "forward") return PlannedDirection::Forward;
  if (s == "left") return PlannedDirection::Left;
  if (s == "right") return PlannedDirection::Right;
  throw std::runtime_error("unknown direction '" + s + "'");
}

Range range_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("range must be [lo, hi]");
  Range r{j[0].get<double>(), j[1].get<double>()};
  if (r.lo > r.hi) throw std::runtime_error("range lo > hi");
  return r;
}

}  // namespace

ScenarioTemplate load_template(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read template '" + path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("template '" + path + "': " + e.what());
  }
  ScenarioTemplate t;
  t.map_path = j.value("map", std::string());
  const auto& ego = j.at("ego");
  t.ego_lane = ego.at("lane").get<std::string>();
  t.ego_offset = range_from_json(ego.at("offset_range"));
  t.ego_direction = direction_from_string(ego.value("direction", std::string("forward")));
  for (const auto& nj : j.value("npcs", nlohmann::json::array())) {
    NpcTemplate nt;
    for (const auto& ty : nj.value("types", nlohmann::json::array({"car"}))) {
      nt.types.push_back(ty.get<std::string>());
    }
    for (const auto& wj : nj.at("waypoints")) {
      WaypointTemplate wt;
      wt.lane_id = wj.at("lane").get<std::string>();
      wt.offset = range_from_json(wj.at("offset_range"));
      if (wj.contains("speed_range")) wt.speed = range_from_json(wj.at("speed_range"));
      nt.waypoints.push_back(std::move(wt));
    }
    if (nt.waypoints.size() < 2) {
      throw std::runtime_error("template NPC needs >= 2 waypoints");
    }
    // Destination speed is not operable.
    nt.waypoints.back().speed = Range{0, 0};
    t.npcs.push_back(std::move(nt));
  }
  for (const auto& pj : j.value("pedestrians", nlohmann::json::array())) {
    PedestrianTemplate pt;
    for (const auto& ty : pj.value("types", nlohmann::json::array({"adult"}))) {
      pt.types.push_back(ty.get<std::string>());
    }
    for (const auto& qj : pj.at("points")) {
      PedPointTemplate q;
      q.x = range_from_json(qj.at("x_range"));
      q.y = range_from_json(qj.at("y_range"));
      q.speed = qj.contains("speed_range") ? range_from_json(qj.at("speed_range"))
                                           : Range{0.5, kMaxPedSpeedMps};
      pt.points.push_back(q);
    }
    if (pt.points.size() < 2) throw std::runtime_error("template pedestrian needs >= 2 points");
    t.pedestrians.push_back(std::move(pt));
  }
  for (const auto& oj : j.value("obstacles", nlohmann::json::array())) {
    ObstacleTemplate ot;
    ot.x = range_from_json(oj.at("x_range"));
    ot.y = range_from_json(oj.at("y_range"));
    for (const auto& ty : oj.value("types", nlohmann::json::array({"box"}))) {
      ot.types.push_back(ty.get<std::string>());
    }
    t.obstacles.push_back(std::move(ot));
  }
  if (j.contains("time_range")) t.time_of_day = range_from_json(j["time_range"]);
  if (j.contains("weather_keys")) {
    t.weather_keys.clear();
    for (const auto& k : j["weather_keys"]) t.weather_keys.push_back(k.get<std::string>());
  }
  if (j.contains("light_phase_offset_range")) {
    t.light_phase_offset = range_from_json(j["light_phase_offset_range"]);
  }
  return t;
}

void validate_genome(const ScenarioGenome& g, const MapContext& map) {
  const Lane* ego_lane = map.find_lane(g.ego_start.lane_id);
  if (!ego_lane) {
    throw std::invalid_argument("ego_start.lane_id: unknown lane '" +
                                g.ego_start.lane_id + "'");
  }
  double len = polyline_length(ego_lane->centerline);
  if (g.ego_start.offset_m < 0 || g.ego_start.offset_m > len) {
    throw std::invalid_argument("ego_start.offset: outside lane length");
  }
  for (std::size_t i = 0; i < g.npc_tracks.size(); ++i) {
    const auto& track = g.npc_tracks[i];
    if (track.waypoints.size() < 2) {
      throw std::invalid_argument("npc_tracks[" + std::to_string(i) +
                                  "]: needs >= 2 waypoints");
    }
    for (std::size_t k = 0; k < track.waypoints.size(); ++k) {
      const auto& wp = track.waypoints[k];
      std::string at = "npc_tracks[" + std::to_string(i) + "].waypoints[" +
                       std::to_string(k) + "]";
      const Lane* lane = map.find_lane(wp.lane_id);
      if (!lane) throw std::invalid_argument(at + ".lane_id: unknown lane '" + wp.lane_id + "'");
      double lane_len = polyline_length(lane->centerline);
      if (wp.offset_m < 0 || wp.offset_m > lane_len) {
        throw std::invalid_argument(at + ".offset: outside lane length");
      }
      if (wp.speed_kmh < 0 || wp.speed_kmh > kMaxVehicleSpeedKmh) {
        throw std::invalid_argument(at + ".speed: outside [0, 120] km/h");
      }
      if (k > 0 && track.waypoints[k - 1].lane_id == wp.lane_id &&
          track.waypoints[k - 1].offset_m > wp.offset_m) {
        throw std::invalid_argument(at + ".offset: decreases along lane");
      }
    }
    if (track.waypoints.back().speed_kmh != 0) {
      throw std::invalid_argument("npc_tracks[" + std::to_string(i) +
                                  "]: final waypoint speed must be 0");
    }
  }
  for (std::size_t i = 0; i < g.pedestrian_tracks.size(); ++i) {
    const auto& track = g.pedestrian_tracks[i];
    if (track.points.size() < 2) {
      throw std::invalid_argument("pedestrian_tracks[" + std::to_string(i) +
                                  "]: needs >= 2 points");
    }
    for (std::size_t k = 0; k < track.points.size(); ++k) {
      const auto& pt = track.points[k];
      if (pt.speed_mps < 0 || pt.speed_mps > kMaxPedSpeedMps) {
        throw std::invalid_argument("pedestrian_tracks[" + std::to_string(i) + "].points[" +
                                    std::to_string(k) + "].speed: outside [0, 3] m/s");
      }
    }
  }
  for (const auto& [key, degree] : g.weather) {
    if (degree < 0 || degree > 1) {
      throw std::invalid_argument("weather." + key + ": outside [0, 1]");
    }
  }
  if (g.time_of_day_min < 0 || g.time_of_day_min >= 1440) {
    throw std::invalid_argument("time_of_day: outside [0, 1440)");
  }
  if (g.light_phase_offset < 0) {
    throw std::invalid_argument("light_phase_offset: negative");
  }
}

bool same_template_shape(const ScenarioGenome& a, const ScenarioGenome& b) {
  if (a.ego_start.lane_id != b.ego_start.lane_id) return false;
  if (a.npc_tracks.size() != b.npc_tracks.size()) return false;
  if (a.pedestrian_tracks.size() != b.pedestrian_tracks.size()) return false;
  if (a.obstacles.size() != b.obstacles.size()) return false;
  for (std::size_t i = 0; i < a.npc_tracks.size(); ++i) {
    const auto& wa = a.npc_tracks[i].waypoints;
    const auto& wb = b.npc_tracks[i].waypoints;
    if (wa.size() != wb.size()) return false;
    for (std::size_t k = 0; k < wa.size(); ++k) {
      if (wa[k].lane_id != wb[k].lane_id) return false;
    }
  }
  for (std::size_t i = 0; i < a.pedestrian_tracks.size(); ++i) {
    if (a.pedestrian_tracks[i].points.size() != b.pedestrian_tracks[i].points.size()) {
      return false;
    }
  }
  if (a.weather.size() != b.weather.size()) return false;
  for (auto ita = a.weather.begin(), itb = b.weather.begin(); ita != a.weather.end();
       ++ita, ++itb) {
    if (ita->first != itb->first) return false;
  }
  return true;
}

namespace {

// Concatenated waypoint path of one NPC with a speed anchor per waypoint.
struct NpcPath {
  Polyline path;
  std::vector<double> anchor_station;
  std::vector<double> anchor_speed;
  std::string lane_at_end;

  double speed_at(double s) const {
    if (anchor_station.empty()) return 0;
    if (s <= anchor_station.front()) return anchor_speed.front();
    for (std::size_t i = 1; i < anchor_station.size(); ++i) {
      if (s <= anchor_station[i]) {
        double a = anchor_station[i - 1];
        double b = anchor_station[i];
        double f = b > a ? (s - a) / (b - a) : 1.0;
        return anchor_speed[i - 1] + (anchor_speed[i] - anchor_speed[i - 1]) * f;
      }
    }
    return 0;  // past the destination
  }
};

// Slice of a lane centerline between two stations (a <= b).
Polyline centerline_slice(const Polyline& line, double a, double b) {
  Polyline out;
  out.push_back(polyline_point(line, a));
  double acc = 0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    double seg = distance(line[i - 1], line[i]);
    double end = acc + seg;
    if (end > a && end < b) out.push_back(line[i]);
    acc = end;
  }
  out.push_back(polyline_point(line, b));
  return out;
}

NpcPath build_npc_path(const NpcTrack& track, const MapContext& map) {
  NpcPath out;
  double station = 0;
  for (std::size_t k = 0; k + 1 < track.waypoints.size(); ++k) {
    const Waypoint& from = track.waypoints[k];
    const Waypoint& to = track.waypoints[k + 1];
    const Lane* lane_from = map.find_lane(from.lane_id);
    Polyline piece;
    if (from.lane_id == to.lane_id) {
      piece = centerline_slice(lane_from->centerline, from.offset_m, to.offset_m);
    } else {
      const Lane* lane_to = map.find_lane(to.lane_id);
      piece = centerline_slice(lane_from->centerline, from.offset_m,
                               polyline_length(lane_from->centerline));
      Polyline tail = centerline_slice(lane_to->centerline, 0, to.offset_m);
      piece.insert(piece.end(), tail.begin(), tail.end());
    }
    if (out.path.empty()) {
      out.anchor_station.push_back(0);
      out.anchor_speed.push_back(from.speed_kmh);
      out.path = piece;
    } else {
      out.path.insert(out.path.end(), piece.begin(), piece.end());
    }
    station += polyline_length(piece);
    out.anchor_station.push_back(station);
    out.anchor_speed.push_back(to.speed_kmh);
  }
  out.lane_at_end = track.waypoints.back().lane_id;
  return out;
}

LightState light_at(const SignalHead& head, const LightCycle& cycle, int step,
                    std::int64_t phase_offset) {
  int total = cycle.total();
  int phase = static_cast<int>((step + phase_offset) % total);
  LightColor color;
  if (phase < cycle.green) {
    color = LightColor::Green;
  } else if (phase < cycle.green + cycle.yellow) {
    color = LightColor::Yellow;
  } else {
    color = LightColor::Red;
  }
  bool blink = color == LightColor::Yellow && head.blink_on_yellow;
  return {color, blink};
}

struct NpcSim {
  NpcPath path;
  double station = 0;
  NpcType type;
  std::string lane_id;
};

struct PedSim {
  const PedestrianTrack* track;
  std::size_t segment = 0;
  double along = 0;  // metres into the current segment
  Vec2 position;
};

}  // namespace

std::vector<WorldState> simulate(const ScenarioGenome& genome, const Driver& driver,
                                 const SimConfig& cfg, const MapPtr& map,
                                 std::uint64_t seed) {
  if (cfg.steps < 1) throw std::invalid_argument("SimConfig.steps must be >= 1");
  validate_genome(genome, *map);

  const Lane* ego_lane = map->find_lane(genome.ego_start.lane_id);
  const double ego_len = polyline_length(ego_lane->centerline);

  double ego_station = genome.ego_start.offset_m;
  double ego_speed_kmh = 0;
  double ego_acc = 0;
  DriverControl control;

  std::vector<NpcSim> npcs;
  for (const auto& track : genome.npc_tracks) {
    NpcSim n;
    n.path = build_npc_path(track, *map);
    n.type = track.type;
    n.lane_id = track.waypoints.front().lane_id;
    npcs.push_back(std::move(n));
  }

  std::vector<PedSim> peds;
  for (const auto& track : genome.pedestrian_tracks) {
    PedSim p;
    p.track = &track;
    p.position = track.points.front().position;
    peds.push_back(p);
  }

  Environment env;
  auto deg = [&](const char* key) {
    auto it = genome.weather.find(key);
    return it == genome.weather.end() ? 0.0 : it->second;
  };
  env.rain = deg("rain");
  env.fog = deg("fog");
  env.snow = deg("snow");
  env.visibility_m =
      2000.0 * (1.0 - 0.9 * std::max({env.fog, 0.5 * env.rain, 0.7 * env.snow}));
  env.time_of_day_min = genome.time_of_day_min;
  env.street_light_on = env.time_of_day_min < 360 || env.time_of_day_min >= 1080;

  auto run = driver.start(seed);

  std::vector<WorldState> out;
  out.reserve(cfg.steps);
  for (int step = 0; step < cfg.steps; ++step) {
    WorldState w;
    w.time_step = step;
    w.map = map;
    w.env = env;

    w.ego.position = polyline_point(ego_lane->centerline, ego_station);
    Vec2 tangent = polyline_tangent(ego_lane->centerline, ego_station);
    w.ego.heading = std::atan2(tangent.y, tangent.x);
    w.ego.speed_kmh = ego_speed_kmh;
    w.ego.acc_mps2 = ego_acc;
    w.ego.lane_id = genome.ego_start.lane_id;
    w.ego.signals.direction = genome.ego_direction;
    w.ego.signals.turn_signal = control.turn_signal;
    w.ego.signals.horn_on = control.horn;
    w.ego.signals.is_changing_lane = control.lane_change_request;
    w.ego.signals.brake_pct =
        ego_acc < 0 ? std::min(100.0, -ego_acc / kMaxAccelMps2 * 100.0) : 0.0;

    for (std::size_t i = 0; i < npcs.size(); ++i) {
      const auto& n = npcs[i];
      NpcState s;
      s.id = static_cast<int>(i);
      s.position = polyline_point(n.path.path, n.station);
      Vec2 tan = polyline_tangent(n.path.path, n.station);
      s.heading = std::atan2(tan.y, tan.x);
      s.speed_kmh = n.path.speed_at(n.station);
      s.lane_id = n.lane_id;
      s.type = n.type;
      s.direction = PlannedDirection::Forward;
      w.npcs.push_back(s);
    }

    for (std::size_t i = 0; i < peds.size(); ++i) {
      PedestrianState s;
      s.id = static_cast<int>(i);
      s.position = peds[i].position;
      s.speed_mps = peds[i].segment + 1 < peds[i].track->points.size()
                        ? peds[i].track->points[peds[i].segment].speed_mps
                        : 0.0;
      w.pedestrians.push_back(s);
    }

    for (const auto& ob : genome.obstacles) {
      w.obstacles.push_back({ob.position, ob.type});
    }

    for (const auto& head : map->signal_heads) {
      w.lights.push_back(light_at(head, cfg.light_cycle, step, genome.light_phase_offset));
    }

    out.push_back(w);

    // Advance to step+1.
    control = run->step(w);
    double target = std::clamp(control.target_speed_kmh, 0.0, kMaxVehicleSpeedKmh);
    double dv_max = kMaxAccelMps2 * cfg.dt * 3.6;
    double dv = std::clamp(target - ego_speed_kmh, -dv_max, dv_max);
    ego_speed_kmh = std::max(0.0, ego_speed_kmh + dv);
    ego_acc = dv / 3.6 / cfg.dt;
    ego_station = std::min(ego_len, ego_station + ego_speed_kmh / 3.6 * cfg.dt);
    if (ego_station >= ego_len) ego_speed_kmh = 0;  // end of route

    for (auto& n : npcs) {
      double v = n.path.speed_at(n.station);
      n.station += v / 3.6 * cfg.dt;
    }
    for (auto& p : peds) {
      const auto& pts = p.track->points;
      double budget = (p.segment + 1 < pts.size() ? pts[p.segment].speed_mps : 0.0) * cfg.dt;
      while (budget > 0 && p.segment + 1 < pts.size()) {
        Vec2 a = pts[p.segment].position;
        Vec2 b = pts[p.segment + 1].position;
        double seg_len = distance(a, b);
        double remain = seg_len - p.along;
        if (budget < remain) {
          p.along += budget;
          budget = 0;
        } else {
          budget -= remain;
          ++p.segment;
          p.along = 0;
        }
      }
      if (p.segment + 1 < pts.size()) {
        Vec2 a = pts[p.segment].position;
        Vec2 b = pts[p.segment + 1].position;
        double seg_len = distance(a, b);
        double f = seg_len > 0 ? p.along / seg_len : 0;
        p.position = a + (b - a) * f;
      } else {
        p.position = pts.back().position;
      }
    }
  }
  return out;
}

std::vector<WorldState> simulate(const ScenarioGenome& genome, const Driver& driver,
                                 const SimConfig& cfg, std::uint64_t seed) {
  return simulate(genome, driver, cfg, load_map(cfg.map_path), seed);
}

RunFlags analyze_run(std::span<const WorldState> states) {
  RunFlags flags;
  for (const auto& w : states) {
    for (const auto& npc : w.npcs) {
      if (distance(npc.position, w.ego.position) < 2 * kVehicleRadiusM) {
        flags.accident = true;
      }
    }
    for (const auto& ped : w.pedestrians) {
      if (distance(ped.position, w.ego.position) < kVehicleRadiusM + kPedestrianRadiusM) {
        flags.accident = true;
      }
    }
    for (const auto& ob : w.obstacles) {
      if (distance(ob.position, w.ego.position) < 2 * kVehicleRadiusM) {
        flags.accident = true;
      }
    }
    if (!w.lights.empty()) {
      int head = w.map->head_index_for_lane(w.ego.lane_id);
      if (head >= 0 && w.lights[head].color == LightColor::Red) {
        for (const auto& j : w.map->junctions) {
          if (point_in_polygon(j, w.ego.position)) {
            flags.red_crossing = true;
            break;
          }
        }
      }
    }
  }
  return flags;
}

namespace {

nlohmann::ordered_json genome_json(const ScenarioGenome& g) {
  nlohmann::ordered_json j;
  j["ego_start"] = {{"lane", g.ego_start.lane_id}, {"offset", g.ego_start.offset_m}};
  j["ego_direction"] = to_string(g.ego_direction);
  auto npcs = nlohmann::ordered_json::array();
  for (const auto& track : g.npc_tracks) {
    nlohmann::ordered_json tj;
    tj["type"] = to_string(track.type);
    auto wps = nlohmann::ordered_json::array();
    for (const auto& wp : track.waypoints) {
      wps.push_back({{"lane", wp.lane_id}, {"offset", wp.offset_m}, {"speed", wp.speed_kmh}});
    }
    tj["waypoints"] = std::move(wps);
    npcs.push_back(std::move(tj));
  }
  j["npc_tracks"] = std::move(npcs);
  auto peds = nlohmann::ordered_json::array();
  for (const auto& track : g.pedestrian_tracks) {
    nlohmann::ordered_json tj;
    tj["type"] = track.type;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& pt : track.points) {
      pts.push_back({{"pos", {pt.position.x, pt.position.y}}, {"speed", pt.speed_mps}});
    }
    tj["points"] = std::move(pts);
    peds.push_back(std::move(tj));
  }
  j["pedestrian_tracks"] = std::move(peds);
  auto obs = nlohmann::ordered_json::array();
  for (const auto& ob : g.obstacles) {
    obs.push_back({{"pos", {ob.position.x, ob.position.y}}, {"type", ob.type}});
  }
  j["obstacles"] = std::move(obs);
  j["time_of_day"] = g.time_of_day_min;
  j["weather"] = g.weather;
  j["light_phase_offset"] = g.light_phase_offset;
  return j;
}

ScenarioGenome genome_from(const nlohmann::json& j) {
  ScenarioGenome g;
  g.ego_start.lane_id = j.at("ego_start").at("lane").get<std::string>();
  g.ego_start.offset_m = j.at("ego_start").at("offset").get<double>();
  g.ego_direction = direction_from_string(j.value("ego_direction", std::string("forward")));
  for (const auto& tj : j.value("npc_tracks", nlohmann::json::array())) {
    NpcTrack track;
    track.type = npc_type_from_string(tj.value("type", std::string("car")));
    for (const auto& wj : tj.at("waypoints")) {
      track.waypoints.push_back({wj.at("lane").get<std::string>(),
                                 wj.at("offset").get<double>(),
                                 wj.at("speed").get<double>()});
    }
    g.npc_tracks.push_back(std::move(track));
  }
  for (const auto& tj : j.value("pedestrian_tracks", nlohmann::json::array())) {
    PedestrianTrack track;
    track.type = tj.value("type", std::string("adult"));
    for (const auto& pj : tj.at("points")) {
      track.points.push_back(
          {{pj.at("pos")[0].get<double>(), pj.at("pos")[1].get<double>()},
           pj.at("speed").get<double>()});
    }
    g.pedestrian_tracks.push_back(std::move(track));
  }
  for (const auto& oj : j.value("obstacles", nlohmann::json::array())) {
    g.obstacles.push_back({{oj.at("pos")[0].get<double>(), oj.at("pos")[1].get<double>()},
                           oj.value("type", std::string("box"))});
  }
  g.time_of_day_min = j.value("time_of_day", 720.0);
  if (j.contains("weather")) {
    for (const auto& [key, value] : j["weather"].items()) {
      g.weather[key] = value.get<double>();
    }
  }
  g.light_phase_offset = j.value("light_phase_offset", 0);
  return g;
}

}  // namespace

std::string genome_to_json(const ScenarioGenome& g) { return genome_json(g).dump(2); }

ScenarioGenome genome_from_json(const std::string& text) {
  return genome_from(nlohmann::json::parse(text));
}

ScenarioGenome load_genome(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read genome '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return genome_from_json(ss.str());
}

}  // namespace lawfuzz
