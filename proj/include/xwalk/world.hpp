// Copyright 2026 The xwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XWALK__WORLD_HPP_
#define XWALK__WORLD_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xwalk
{

// Frame: the conflict point is the origin. The vehicle drives along +x on the
// line y = 0; the pedestrian crosses along +y on the line x = 0, starting on
// the negative side.

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kSuddenDecelThreshold = 2.5;  // m/s^2, strict ">"
inline constexpr double kPetThreshold = 1.5;           // s
inline constexpr double kBrakeDistanceMin = 4.0;       // m
inline constexpr double kBrakeDistanceMax = 25.0;      // m
inline constexpr double kTtaMin = 6.0;                 // s
inline constexpr double kTtaMax = 18.0;                // s
inline constexpr double kVehicleAccelMin = -8.0;       // actuation limits, m/s^2
inline constexpr double kVehicleAccelMax = 2.0;
inline constexpr double kPedSpeedMax = 4.0;            // sprint speed, m/s

enum class PedestrianModel : std::uint8_t { none, scripted, human_like, jaywalker };
/// constant_speed ignores the pedestrian entirely (calibration runs).
enum class ControllerKind : std::uint8_t { cruise_brake, foresight_yield, constant_speed };

std::string_view to_string(PedestrianModel m);
std::string_view to_string(ControllerKind c);
std::optional<PedestrianModel> parse_pedestrian_model(std::string_view s);
std::optional<ControllerKind> parse_controller_kind(std::string_view s);

struct ControllerParams
{
  double target_speed = 30.0 / 3.6;  // m/s
  double braking_distance = 5.0;     // m
  double max_brake = 8.0;            // m/s^2, magnitude
  double comfort_accel = 2.0;        // m/s^2
  double comfort_brake = 2.5;        // m/s^2, foresight controller only
  double prediction_horizon = 4.0;   // s
  double stop_margin = 1.0;          // m before the conflict zone
  double resume_debounce = 0.5;      // s hazard-free before cruise_brake resumes
};

/// Everything that defines one trial.
struct ScenarioConfig
{
  double vehicle_speed = 30.0 / 3.6;
  double tta = 10.0;
  double road_half_width = 2.0;
  double ped_start_lateral = 4.0;
  double vehicle_length = 4.5;
  double vehicle_width = 2.0;
  double ped_radius = 0.3;
  double dt = 0.02;
  double max_sim_time = 60.0;
  double finish_line = 30.0;
  std::uint64_t seed = 0;
  PedestrianModel pedestrian_model = PedestrianModel::human_like;
  ControllerKind controller = ControllerKind::cruise_brake;
  ControllerParams controller_params{};
  /// When false the vehicle is parked out of the scene (pedestrian-only runs).
  bool vehicle_present = true;
};

/// Throws ValidationError naming the first violated invariant.
void validate(const ScenarioConfig & cfg);
void validate(const ControllerParams & p);

struct VehicleState
{
  double x = 0.0;  // reference centre, m
  double v = 0.0;  // m/s, never negative
  double a = 0.0;  // last applied acceleration, m/s^2
};

enum class Phase : std::uint8_t {
  none,
  // human-like
  approaching,
  deciding,
  waiting,  // shared with the jaywalker
  crossing, // shared with the jaywalker
  done,
  // scripted
  walking,
  blocked,
  // jaywalker
  initialising,
  frozen,
  survival,
  finished,
};

std::string_view to_string(Phase p);

/// Model-specific scalars carried between steps.
struct PedestrianInternal
{
  double evidence = 0.0;
  double timer = 0.0;          // start delay or freeze countdown
  bool start_pending = false;  // committed to cross, waiting out the reaction delay
  bool freeze_armed = false;   // jaywalker: this crossing will freeze once
  bool froze = false;          // jaywalker: freeze already spent this crossing
  bool retreating = false;     // jaywalker survival direction
  int freeze_count = 0;
  int survival_count = 0;
};

struct PedestrianState
{
  double y = 0.0;
  double v = 0.0;
  Phase phase = Phase::none;
  PedestrianInternal internal{};
};

enum class EventKind : std::uint8_t {
  spawn,
  decision_cross,
  decision_wait,
  crossing_start,
  crossing_complete,
  ped_conflict_entry,
  ped_conflict_exit,
  veh_conflict_entry,
  veh_conflict_exit,
  brake_onset,
  freeze_start,
  survival_start,
  collision,
  vehicle_finished,
  truncated,
};

std::string_view to_string(EventKind e);

struct Sample
{
  double t = 0.0;
  VehicleState vehicle{};
  PedestrianState pedestrian{};
};

struct Event
{
  double t = 0.0;
  EventKind kind = EventKind::spawn;
};

struct Trace
{
  std::vector<Sample> samples;
  std::vector<Event> events;
  ScenarioConfig config{};
  bool truncated = false;  // max_sim_time elapsed before a stop condition

  std::optional<double> first_event(EventKind kind) const;
};

/// Axis-aligned conflict rectangle: vehicle footprint swept across the
/// pedestrian line, inflated by the pedestrian radius.
struct ConflictZone
{
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
};

ConflictZone conflict_zone(const ScenarioConfig & cfg);

/// Vehicle reference position at t = 0 so that it reaches x = 0 after `tta`.
inline double spawn_position(const ScenarioConfig & cfg) { return -cfg.vehicle_speed * cfg.tta; }

/// Signed distance from the vehicle front bumper to the crossing line.
inline double front_gap(const VehicleState & veh, const ScenarioConfig & cfg)
{
  return -veh.x - 0.5 * cfg.vehicle_length;
}

/// True once the vehicle rear has crossed the pedestrian line by `margin`.
inline bool rear_cleared(const VehicleState & veh, const ScenarioConfig & cfg, double margin = 0.0)
{
  return veh.x - 0.5 * cfg.vehicle_length >= margin;
}

/// Time for the front bumper to reach the crossing line at current speed:
/// zero while the vehicle straddles the line, infinite when stopped short of
/// it or once the rear has cleared it.
double time_to_arrival(const VehicleState & veh, const ScenarioConfig & cfg);

inline bool on_road(double y, const ScenarioConfig & cfg)
{
  return y >= -(cfg.road_half_width + cfg.ped_radius) && y <= cfg.road_half_width + cfg.ped_radius;
}

}  // namespace xwalk

#endif  // XWALK__WORLD_HPP_
