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

#include "xwalk/world.hpp"

#include "xwalk/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace xwalk
{

namespace
{

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N> & table, std::string_view s)
{
  for (const auto & [value, name] : table) {
    if (name == s) {
      return value;
    }
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N> & table, E e)
{
  for (const auto & [value, name] : table) {
    if (value == e) {
      return name;
    }
  }
  return "unknown";
}

constexpr std::array<std::pair<PedestrianModel, std::string_view>, 4> kPedModels{{
  {PedestrianModel::none, "none"},
  {PedestrianModel::scripted, "scripted"},
  {PedestrianModel::human_like, "human_like"},
  {PedestrianModel::jaywalker, "jaywalker"},
}};

constexpr std::array<std::pair<ControllerKind, std::string_view>, 3> kControllers{{
  {ControllerKind::cruise_brake, "cruise_brake"},
  {ControllerKind::foresight_yield, "foresight_yield"},
  {ControllerKind::constant_speed, "constant_speed"},
}};

constexpr std::array<std::pair<Phase, std::string_view>, 12> kPhases{{
  {Phase::none, "none"},
  {Phase::approaching, "approaching"},
  {Phase::deciding, "deciding"},
  {Phase::waiting, "waiting"},
  {Phase::crossing, "crossing"},
  {Phase::done, "done"},
  {Phase::walking, "walking"},
  {Phase::blocked, "blocked"},
  {Phase::initialising, "initialising"},
  {Phase::frozen, "frozen"},
  {Phase::survival, "survival"},
  {Phase::finished, "finished"},
}};

constexpr std::array<std::pair<EventKind, std::string_view>, 15> kEvents{{
  {EventKind::spawn, "spawn"},
  {EventKind::decision_cross, "decision_cross"},
  {EventKind::decision_wait, "decision_wait"},
  {EventKind::crossing_start, "crossing_start"},
  {EventKind::crossing_complete, "crossing_complete"},
  {EventKind::ped_conflict_entry, "ped_conflict_entry"},
  {EventKind::ped_conflict_exit, "ped_conflict_exit"},
  {EventKind::veh_conflict_entry, "veh_conflict_entry"},
  {EventKind::veh_conflict_exit, "veh_conflict_exit"},
  {EventKind::brake_onset, "brake_onset"},
  {EventKind::freeze_start, "freeze_start"},
  {EventKind::survival_start, "survival_start"},
  {EventKind::collision, "collision"},
  {EventKind::vehicle_finished, "vehicle_finished"},
  {EventKind::truncated, "truncated"},
}};

void require(bool ok, const std::string & what)
{
  if (!ok) {
    throw ValidationError(what);
  }
}

}  // namespace

std::string_view to_string(PedestrianModel m) { return name_of(kPedModels, m); }
std::string_view to_string(ControllerKind c) { return name_of(kControllers, c); }
std::string_view to_string(Phase p) { return name_of(kPhases, p); }
std::string_view to_string(EventKind e) { return name_of(kEvents, e); }

std::optional<PedestrianModel> parse_pedestrian_model(std::string_view s)
{
  return lookup(kPedModels, s);
}

std::optional<ControllerKind> parse_controller_kind(std::string_view s)
{
  return lookup(kControllers, s);
}

void validate(const ControllerParams & p)
{
  require(p.target_speed > 0.0, "controller.target_speed must be > 0");
  require(
    p.braking_distance >= kBrakeDistanceMin && p.braking_distance <= kBrakeDistanceMax,
    "controller.braking_distance must lie in [4, 25] m");
  require(p.max_brake > 0.0 && p.max_brake <= 8.0, "controller.max_brake must lie in (0, 8] m/s^2");
  require(p.comfort_accel > 0.0, "controller.comfort_accel must be > 0");
  require(
    p.comfort_brake > 0.0 && p.comfort_brake <= 2.5,
    "controller.comfort_brake must lie in (0, 2.5] m/s^2");
  require(p.prediction_horizon > 0.0, "controller.prediction_horizon must be > 0");
  require(p.stop_margin >= 0.0, "controller.stop_margin must be >= 0");
  require(p.resume_debounce >= 0.0, "controller.resume_debounce must be >= 0");
}

void validate(const ScenarioConfig & cfg)
{
  require(cfg.vehicle_speed > 0.0, "scenario.vehicle_speed must be > 0");
  require(cfg.tta >= kTtaMin && cfg.tta <= kTtaMax, "scenario.tta must lie in [6, 18] s");
  require(cfg.dt > 0.0 && cfg.dt <= 0.1, "scenario.dt must lie in (0, 0.1] s");
  require(cfg.vehicle_length > 0.0, "scenario.vehicle_length must be > 0");
  require(cfg.vehicle_width > 0.0, "scenario.vehicle_width must be > 0");
  require(cfg.ped_radius >= 0.0, "scenario.ped_radius must be >= 0");
  require(cfg.road_half_width >= 1.0, "scenario.road_half_width must be >= 1.0 m");
  require(
    cfg.ped_start_lateral > cfg.road_half_width,
    "scenario.ped_start_lateral must exceed road_half_width (pedestrian starts off the road)");
  require(cfg.max_sim_time > 0.0, "scenario.max_sim_time must be > 0");
  require(cfg.finish_line > 0.0, "scenario.finish_line must be > 0");
  validate(cfg.controller_params);
}

std::optional<double> Trace::first_event(EventKind kind) const
{
  auto it = std::find_if(events.begin(), events.end(), [kind](const Event & e) { return e.kind == kind; });
  if (it == events.end()) {
    return std::nullopt;
  }
  return it->t;
}

ConflictZone conflict_zone(const ScenarioConfig & cfg)
{
  const double hx = 0.5 * cfg.vehicle_length + cfg.ped_radius;
  const double hy = 0.5 * cfg.vehicle_width + cfg.ped_radius;
  return {-hx, hx, -hy, hy};
}

double time_to_arrival(const VehicleState & veh, const ScenarioConfig & cfg)
{
  const double gap = front_gap(veh, cfg);
  if (gap < 0.0) {
    // Already over the line: arriving now until the rear clears it.
    return rear_cleared(veh, cfg) ? kInf : 0.0;
  }
  if (veh.v <= 0.0) {
    return kInf;
  }
  return gap / veh.v;
}

}  // namespace xwalk
