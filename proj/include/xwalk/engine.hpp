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

#ifndef XWALK__ENGINE_HPP_
#define XWALK__ENGINE_HPP_

#include "xwalk/pedestrians.hpp"
#include "xwalk/world.hpp"

namespace xwalk
{

/// Post-collision hold: both agents stay frozen this long before the trial ends.
inline constexpr double kCollisionHold = 1.0;

/// Footprint overlap test: |x| within L/2 + r and |y| within W/2 + r, inclusive.
bool detect_collision(const VehicleState & veh, const PedestrianState & ped, const ScenarioConfig & cfg);

/// Integrate one trial at fixed dt. Each step the controller and the
/// pedestrian observe the previous state; the vehicle then the pedestrian are
/// advanced with semi-implicit Euler. The individual / jaywalker parameters
/// are used only by the matching pedestrian model.
Trace run_trial(
  const ScenarioConfig & cfg, const IndividualParams & individual = {},
  const JaywalkerParams & jaywalker = {});

/// Same scenario with the pedestrian removed.
ScenarioConfig free_flow_config(const ScenarioConfig & cfg);

}  // namespace xwalk

#endif  // XWALK__ENGINE_HPP_
