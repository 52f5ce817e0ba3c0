#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lawfuzz/world.hpp"

namespace lawfuzz {

// ---- scenario genome ----

struct LanePosition {
  std::string lane_id;
  double offset_m = 0;
};

struct Waypoint {
  std::string lane_id;  // immutable under fuzzing
  double offset_m = 0;
  double speed_kmh = 0;  // final waypoint speed is pinned to 0
};

struct NpcTrack {
  NpcType type = NpcType::Car;
  std::vector<Waypoint> waypoints;
};

struct PedPoint {
  Vec2 position;
  double speed_mps = 0;
};

struct PedestrianTrack {
  std::string type = "adult";
  std::vector<PedPoint> points;
};

struct ObstacleSpec {
  Vec2 position;
  std::string type = "box";
};

// The operable-parameter encoding of one test case: the GA chromosome.
struct ScenarioGenome {
  LanePosition ego_start;
  PlannedDirection ego_direction = PlannedDirection::Forward;  // fixed by template
  std::vector<NpcTrack> npc_tracks;
  std::vector<PedestrianTrack> pedestrian_tracks;
  std::vector<ObstacleSpec> obstacles;
  double time_of_day_min = 720;
  std::map<std::string, double> weather;  // rain/fog/snow degrees in [0,1]
  std::int64_t light_phase_offset = 0;    // steps
};

// ---- scenario template: fixed structure plus per-gene valid ranges ----

struct Range {
  double lo = 0;
  double hi = 0;
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  double width() const { return hi - lo; }
};

struct WaypointTemplate {
  std::string lane_id;
  Range offset;
  Range speed;
};

struct NpcTemplate {
  std::vector<std::string> types;
  std::vector<WaypointTemplate> waypoints;
};

struct PedPointTemplate {
  Range x, y, speed;
};

struct PedestrianTemplate {
  std::vector<std::string> types;
  std::vector<PedPointTemplate> points;
};

struct ObstacleTemplate {
  Range x, y;
  std::vector<std::string> types;
};

struct ScenarioTemplate {
  std::string map_path;
  std::string ego_lane;
  Range ego_offset;
  PlannedDirection ego_direction = PlannedDirection::Forward;
  std::vector<NpcTemplate> npcs;
  std::vector<PedestrianTemplate> pedestrians;
  std::vector<ObstacleTemplate> obstacles;
  Range time_of_day{0, 1439};
  std::vector<std::string> weather_keys{"rain", "fog", "snow"};
  Range light_phase_offset{0, 0};
};

ScenarioTemplate load_template(const std::string& path);

// ---- simulation config ----

struct LightCycle {
  int green = 80;
  int yellow = 30;
  int red = 80;
  int total() const { return green + yellow + red; }
};

struct SimConfig {
  int steps = 300;
  double dt = 0.1;  // seconds per step
  std::string map_path;
  LightCycle light_cycle;
};

inline constexpr double kMaxAccelMps2 = 4.0;
inline constexpr double kVehicleRadiusM = 1.0;
inline constexpr double kPedestrianRadiusM = 0.3;
inline constexpr double kMaxVehicleSpeedKmh = 120.0;
inline constexpr double kMaxPedSpeedMps = 3.0;

// ---- driver stubs (the system under test) ----

struct DriverControl {
  double target_speed_kmh = 0;
  bool lane_change_request = false;
  TurnSignal turn_signal = TurnSignal::Off;
  bool horn = false;
};

class DriverRun {
 public:
  virtual ~DriverRun() = default;
  virtual DriverControl step(const WorldState& w) = 0;
};

class Driver {
 public:
  virtual ~Driver() = default;
  virtual std::string name() const = 0;
  // Per-run policy instance; deterministic for a fixed seed.
  virtual std::unique_ptr<DriverRun> start(std::uint64_t seed) const = 0;
};

// At least `lawful` (stops on yellow when it safely can, yields to priority
// agents, signals turns) and `aggressive` (rushes yellow, seeded disregard
// for priority agents and red lights, no signals).
const std::vector<std::shared_ptr<const Driver>>& builtin_drivers();
std::shared_ptr<const Driver> find_driver(const std::string& name);

// ---- validation and execution ----

// Throws std::invalid_argument naming the offending field path.
void validate_genome(const ScenarioGenome& g, const MapContext& map);

// True when two genomes instantiate the same template: same agent counts,
// same lane sequences, same weather keys.
bool same_template_shape(const ScenarioGenome& a, const ScenarioGenome& b);

// Deterministic fixed-step kinematic execution; returns cfg.steps states.
std::vector<WorldState> simulate(const ScenarioGenome& genome, const Driver& driver,
                                 const SimConfig& cfg, const MapPtr& map,
                                 std::uint64_t seed);
// Convenience overload loading cfg.map_path.
std::vector<WorldState> simulate(const ScenarioGenome& genome, const Driver& driver,
                                 const SimConfig& cfg, std::uint64_t seed);

struct RunFlags {
  bool accident = false;       // bounding-circle overlap with any agent
  bool red_crossing = false;   // ego inside a junction while its light is red
};
RunFlags analyze_run(std::span<const WorldState> states);

// ---- genome JSON (External interface) ----

std::string genome_to_json(const ScenarioGenome& g);
ScenarioGenome genome_from_json(const std::string& text);
ScenarioGenome load_genome(const std::string& path);

}  // namespace lawfuzz
