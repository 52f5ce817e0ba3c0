#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lawfuzz {

struct Vec2 {
  double x = 0;
  double y = 0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double length(Vec2 v);
double distance(Vec2 a, Vec2 b);
double dot(Vec2 a, Vec2 b);
double cross_z(Vec2 a, Vec2 b);

using Polyline = std::vector<Vec2>;
using Polygon = std::vector<Vec2>;

struct Segment {
  Vec2 a;
  Vec2 b;
};

double polyline_length(const Polyline& line);
// Point at arclength s (clamped to [0, length]).
Vec2 polyline_point(const Polyline& line, double s);
// Unit tangent at arclength s.
Vec2 polyline_tangent(const Polyline& line, double s);
// Arclength of the closest point of the polyline to p.
double polyline_station(const Polyline& line, Vec2 p);

bool point_in_polygon(const Polygon& poly, Vec2 p);
// 0 when inside, otherwise distance to the closest edge.
double distance_to_polygon(const Polygon& poly, Vec2 p);
// Intersection parameter s (arclength along [a,b]) with another segment.
std::optional<double> segment_intersection(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

enum class LaneTurn { Forward, Left, Right, UTurn };
enum class RoadSide { Left, Right };

struct Lane {
  std::string id;
  int number = 1;
  RoadSide side = RoadSide::Right;
  LaneTurn direction = LaneTurn::Forward;
  Polyline centerline;
  double speed_limit_lower = 0;    // km/h
  double speed_limit_upper = 120;  // km/h
};

enum class SignalKindTag { Common, Arrow, None };
enum class LightColor { Red, Yellow, Green, Black };

struct SignalHead {
  std::string id;
  SignalKindTag kind = SignalKindTag::Common;
  std::string governs_lane;
  bool blink_on_yellow = false;
};

struct MapContext {
  std::vector<Lane> lanes;
  std::vector<Polygon> junctions;
  std::vector<Segment> stoplines;
  std::vector<Polygon> crosswalks;
  std::vector<SignalHead> signal_heads;

  const Lane* find_lane(const std::string& id) const;
  int head_index_for_lane(const std::string& lane_id) const;  // -1 when none
};

using MapPtr = std::shared_ptr<const MapContext>;

MapPtr load_map(const std::string& path);
MapPtr parse_map_json(const std::string& json_text);

enum class TurnSignal { Off, Left, Right };
enum class PlannedDirection { Forward, Left, Right };
enum class Gear { Neutral, Drive, Reverse, Park, Low, Invalid, None };
enum class NpcType { Bus, Car, PriorityVehicle };

const char* to_string(LightColor c);
const char* to_string(SignalKindTag k);
const char* to_string(TurnSignal s);
const char* to_string(PlannedDirection d);
const char* to_string(Gear g);
const char* to_string(NpcType t);
const char* to_string(LaneTurn t);
const char* to_string(RoadSide s);
NpcType npc_type_from_string(const std::string& s);

struct EgoSignals {
  TurnSignal turn_signal = TurnSignal::Off;
  bool horn_on = false;
  bool high_beam_on = false;
  bool low_beam_on = false;
  bool engine_on = true;
  Gear gear = Gear::Drive;
  PlannedDirection direction = PlannedDirection::Forward;
  bool to_manual = false;
  bool is_changing_lane = false;
  bool is_over_taking = false;
  bool is_turning_around = false;
  double brake_pct = 0;
};

struct EgoState {
  Vec2 position;
  double heading = 0;     // radians
  double speed_kmh = 0;   // >= 0
  double acc_mps2 = 0;
  std::string lane_id;
  EgoSignals signals;
};

struct NpcState {
  int id = 0;
  Vec2 position;
  double heading = 0;
  double speed_kmh = 0;
  std::string lane_id;
  NpcType type = NpcType::Car;
  PlannedDirection direction = PlannedDirection::Forward;
};

struct PedestrianState {
  int id = 0;
  Vec2 position;
  double speed_mps = 0;
};

struct ObstacleState {
  Vec2 position;
  std::string type;
};

struct LightState {
  LightColor color = LightColor::Black;
  bool blinking = false;
};

struct Environment {
  double rain = 0;  // degrees in [0,1]
  double fog = 0;
  double snow = 0;
  double visibility_m = 2000;
  double time_of_day_min = 720;  // minutes since midnight
  bool street_light_on = false;
};

// Snapshot of the simulated world at one time step. Immutable once built.
struct WorldState {
  int time_step = 0;
  EgoState ego;
  std::vector<NpcState> npcs;
  std::vector<PedestrianState> pedestrians;
  std::vector<ObstacleState> obstacles;
  MapPtr map;
  // Parallel to map->signal_heads.
  std::vector<LightState> lights;
  Environment env;
};

}  // namespace lawfuzz
