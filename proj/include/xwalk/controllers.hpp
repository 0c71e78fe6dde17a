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

#ifndef XWALK__CONTROLLERS_HPP_
#define XWALK__CONTROLLERS_HPP_

#include "xwalk/world.hpp"

namespace xwalk
{

/// Per-trial memory of the rule-based controller (brake latch and debounce).
struct ControllerState
{
  bool braking = false;
  double clear_time = 0.0;
};

/// Pedestrian on the road, or about to step onto it from the kerb band.
bool pedestrian_hazard(const PedestrianState & ped, const ScenarioConfig & cfg);

/// Deceleration magnitude that brings the vehicle to rest `stop_margin`
/// before the conflict zone, capped at max_brake.
double stopping_decel(const VehicleState & veh, const ControllerParams & p, const ScenarioConfig & cfg);

/// Acceleration that tracks target_speed, limited to comfort_accel.
double cruise_accel(const VehicleState & veh, const ControllerParams & p, const ScenarioConfig & cfg);

/// Rule-based cruise/brake controller. Braking is triggered when a hazard is
/// present and the front bumper is within braking_distance of the crossing;
/// once latched it releases only after the hazard has been absent for
/// resume_debounce seconds.
double cruise_brake_command(
  const VehicleState & veh, const PedestrianState & ped, const ControllerParams & p,
  const ScenarioConfig & cfg, ControllerState & state);

/// Stateless form for single-shot queries (fresh controller state).
double cruise_brake_command(
  const VehicleState & veh, const PedestrianState & ped, const ControllerParams & p,
  const ScenarioConfig & cfg);

/// True if a constant-velocity extrapolation of the pedestrian puts it in
/// the vehicle path band while the vehicle would occupy the crossing.
bool predicted_conflict(
  const VehicleState & veh, const PedestrianState & ped, const ControllerParams & p,
  const ScenarioConfig & cfg);

/// Smooth predictive yielding controller; braking never exceeds comfort_brake.
double foresight_command(
  const VehicleState & veh, const PedestrianState & ped, const ControllerParams & p,
  const ScenarioConfig & cfg);

double controller_command(
  ControllerKind kind, const VehicleState & veh, const PedestrianState & ped,
  const ControllerParams & p, const ScenarioConfig & cfg, ControllerState & state);

}  // namespace xwalk

#endif  // XWALK__CONTROLLERS_HPP_
