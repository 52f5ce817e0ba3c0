#pragma once

#include <set>
#include <span>
#include <string>

#include "lawfuzz/trace.hpp"
#include "lawfuzz/world.hpp"

namespace lawfuzz {

// Geometry constants behind the derived signals. The pedestrian area-ahead
// depth (5 m) is fixed by the signal's definition; the rest are tool
// parameters.
struct SignalParams {
  double ped_area_ahead_m = 5.0;
  double npc_area_ahead_m = 10.0;
  double lane_width_m = 3.5;
  double crosswalk_near_m = 2.0;   // "likely to cross" threshold
  double sector_half_angle_deg = 45.0;
  int jam_min_npcs = 3;
  double jam_within_m = 30.0;
  double jam_speed_kmh = 5.0;
  double ego_radius_m = 1.0;       // bumper offset and straddle window
  double junction_near_m = 15.0;   // junction context for priority rules
  char default_driver_side = 'l';
};

// Distance from the ego front bumper to the first map feature of each kind
// along the ego's lane-forward path; negative while the feature is under the
// vehicle, +inf when not ahead.
struct FeatureAhead {
  double stopline = 0;
  double junction = 0;
  double crosswalk = 0;
};
FeatureAhead features_ahead(const WorldState& w, const SignalParams& p = {});

bool priority_peds_ahead(const WorldState& w, const SignalParams& p = {});
bool priority_npc_ahead(const WorldState& w, char driver_side = 'l',
                        const SignalParams& p = {});

// Computes a Scene holding exactly the requested signal keys. Direct signals
// copy WorldState fields; geometric signals are derived from the map and
// agent positions. Unknown keys raise std::invalid_argument.
Scene evaluate_signals(const WorldState& w, const std::set<std::string>& needed,
                       const SignalParams& p = {});

Trace trace_from_states(std::span<const WorldState> states,
                        const std::set<std::string>& needed,
                        const SignalParams& p = {});

}  // namespace lawfuzz
