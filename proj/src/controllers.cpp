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

#include "xwalk/controllers.hpp"

#include <algorithm>
#include <cmath>

namespace xwalk
{

namespace
{

constexpr double kKerbBand = 1.0;        // m
constexpr double kMinEvalSpeed = 1.0;    // m/s, occupancy estimate for a stopped vehicle
constexpr double kHoldSpeed = 1e-6;

}  // namespace

bool pedestrian_hazard(const PedestrianState & ped, const ScenarioConfig & cfg)
{
  if (ped.phase == Phase::none) {
    return false;
  }
  if (on_road(ped.y, cfg)) {
    return true;
  }
  const double kerb = cfg.road_half_width;
  if (ped.y < 0.0) {
    return ped.v > 0.0 && ped.y >= -(kerb + kKerbBand);
  }
  return ped.v < 0.0 && ped.y <= kerb + kKerbBand;
}

double stopping_decel(const VehicleState & veh, const ControllerParams & p, const ScenarioConfig & cfg)
{
  if (veh.v <= kHoldSpeed) {
    return p.max_brake;
  }
  const double room = front_gap(veh, cfg) - cfg.ped_radius - p.stop_margin;
  if (room <= 1e-3) {
    return p.max_brake;
  }
  return std::min(p.max_brake, veh.v * veh.v / (2.0 * room));
}

double cruise_accel(const VehicleState & veh, const ControllerParams & p, const ScenarioConfig & cfg)
{
  return std::min(p.comfort_accel, (p.target_speed - veh.v) / cfg.dt);
}

double cruise_brake_command(
  const VehicleState & veh, const PedestrianState & ped, const ControllerParams & p,
  const ScenarioConfig & cfg, ControllerState & state)
{
  const double gap = front_gap(veh, cfg);
  const bool passed = gap < 0.0;
  const bool hazard = pedestrian_hazard(ped, cfg);
  const bool within = std::max(gap, 0.0) <= p.braking_distance;

  if (hazard && within && !passed) {
    state.braking = true;
    state.clear_time = 0.0;
  } else if (state.braking) {
    if (passed) {
      state.braking = false;
    } else if (!hazard) {
      state.clear_time += cfg.dt;
      if (state.clear_time >= p.resume_debounce - 1e-9) {
        state.braking = false;
      }
    } else {
      state.clear_time = 0.0;
    }
  }
  if (state.braking) {
    return -stopping_decel(veh, p, cfg);
  }
  return cruise_accel(veh, p, cfg);
}

double cruise_brake_command(
  const VehicleState & veh, const PedestrianState & ped, const ControllerParams & p,
  const ScenarioConfig & cfg)
{
  ControllerState fresh;
  return cruise_brake_command(veh, ped, p, cfg, fresh);
}

bool predicted_conflict(
  const VehicleState & veh, const PedestrianState & ped, const ControllerParams & p,
  const ScenarioConfig & cfg)
{
  if (ped.phase == Phase::none) {
    return false;
  }
  const ConflictZone zone = conflict_zone(cfg);
  if (veh.x > zone.x_hi) {
    return false;
  }
  const double v = std::max(veh.v, kMinEvalSpeed);
  const double veh_in = std::max(0.0, (zone.x_lo - veh.x) / v);
  const double veh_out = (zone.x_hi - veh.x) / v;
  if (veh_in > p.prediction_horizon) {
    return false;
  }

  // Interval during which the extrapolated pedestrian lies in [y_lo, y_hi].
  double ped_in = 0.0;
  double ped_out = p.prediction_horizon;
  if (std::abs(ped.v) < 1e-9) {
    if (ped.y < zone.y_lo || ped.y > zone.y_hi) {
      return false;
    }
  } else {
    double t1 = (zone.y_lo - ped.y) / ped.v;
    double t2 = (zone.y_hi - ped.y) / ped.v;
    if (t1 > t2) {
      std::swap(t1, t2);
    }
    ped_in = std::max(t1, 0.0);
    ped_out = std::min(t2, p.prediction_horizon);
    if (ped_in > ped_out) {
      return false;
    }
  }
  return ped_in <= veh_out && veh_in <= ped_out;
}

double foresight_command(
  const VehicleState & veh, const PedestrianState & ped, const ControllerParams & p,
  const ScenarioConfig & cfg)
{
  if (!predicted_conflict(veh, ped, p, cfg)) {
    return cruise_accel(veh, p, cfg);
  }
  const ConflictZone zone = conflict_zone(cfg);
  const double room = zone.x_lo - veh.x - p.stop_margin;
  double required = p.comfort_brake;
  if (room > 1e-6) {
    required = veh.v * veh.v / (2.0 * room);
  }
  return -std::min(required, p.comfort_brake);
}

double controller_command(
  ControllerKind kind, const VehicleState & veh, const PedestrianState & ped,
  const ControllerParams & p, const ScenarioConfig & cfg, ControllerState & state)
{
  switch (kind) {
    case ControllerKind::foresight_yield:
      return foresight_command(veh, ped, p, cfg);
    case ControllerKind::constant_speed:
      return 0.0;
    case ControllerKind::cruise_brake:
    default:
      return cruise_brake_command(veh, ped, p, cfg, state);
  }
}

}  // namespace xwalk
