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

#ifndef XWALK__METRICS_HPP_
#define XWALK__METRICS_HPP_

#include "xwalk/world.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace xwalk
{

enum class FirstPasser : std::uint8_t { none, pedestrian, vehicle };

std::string_view to_string(FirstPasser f);
std::optional<FirstPasser> parse_first_passer(std::string_view s);

struct InteractionOutcome
{
  std::optional<double> pet;
  std::optional<bool> accepted;
  bool collision = false;
  double max_decel = 0.0;
  bool sudden_change = false;
  std::optional<double> time_lost;
  FirstPasser first_passer = FirstPasser::none;
};

struct ConflictTimes
{
  std::optional<double> ped_entry;
  std::optional<double> ped_exit;
  std::optional<double> veh_entry;
  std::optional<double> veh_exit;
};

/// Closed-open occupancy interval of the conflict zone; `end` absent when
/// the agent is still inside at the end of the trace.
struct Occupancy
{
  double begin = 0.0;
  std::optional<double> end;
};

/// First entry into the conflict zone and the first exit after it, per agent.
/// A pedestrian exit is leaving the zone band on either side.
ConflictTimes conflict_times(const Trace & trace);

std::vector<Occupancy> pedestrian_occupancy(const Trace & trace);
std::vector<Occupancy> vehicle_occupancy(const Trace & trace);

bool had_collision(const Trace & trace);

/// Post-encroachment time: the gap between the vehicle's zone occupancy and
/// the nearest pedestrian occupancy. Zero when they overlap without contact;
/// absent if either agent never reaches the zone. Throws for collision traces.
std::optional<double> compute_pet(const Trace & trace);

/// Which agent cleared the zone first.
FirstPasser first_passer(const Trace & trace);

/// True if the pedestrian crossed ahead of the vehicle, false if it crossed
/// after the vehicle passed, absent on collision or no crossing.
std::optional<bool> gap_accepted(const Trace & trace);

/// Largest deceleration seen in the recorded vehicle speeds, floored at 0.
double max_deceleration(const Trace & trace);

inline bool is_sudden_change(double max_decel) { return max_decel > kSuddenDecelThreshold; }

/// Time at which the vehicle reference point crossed the finish line,
/// interpolated between samples.
std::optional<double> finish_time(const Trace & trace);

/// max(0, T_interaction - T_free_flow).
double time_lost(const Trace & interaction, const Trace & free_flow);

/// All per-trial metrics. `free_flow` enables time lost.
InteractionOutcome evaluate_outcome(const Trace & trace, const Trace * free_flow = nullptr);

struct OutcomeSummary
{
  std::size_t trials = 0;
  std::size_t collisions = 0;
  double collision_rate = 0.0;
  double acceptance_rate = 0.0;     // over trials with a defined acceptance
  std::size_t acceptance_defined = 0;
  double sudden_change_rate = 0.0;
  std::size_t pet_count = 0;
  std::optional<double> mean_pet;
  std::optional<double> min_pet;
  std::optional<double> mean_time_lost;
};

OutcomeSummary summarize(std::span<const InteractionOutcome> outcomes);

}  // namespace xwalk

#endif  // XWALK__METRICS_HPP_
