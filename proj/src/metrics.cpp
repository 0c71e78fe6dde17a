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

#include "xwalk/metrics.hpp"

#include "xwalk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xwalk
{

std::string_view to_string(FirstPasser f)
{
  switch (f) {
    case FirstPasser::pedestrian:
      return "pedestrian";
    case FirstPasser::vehicle:
      return "vehicle";
    default:
      return "none";
  }
}

std::optional<FirstPasser> parse_first_passer(std::string_view s)
{
  if (s == "pedestrian") {
    return FirstPasser::pedestrian;
  }
  if (s == "vehicle") {
    return FirstPasser::vehicle;
  }
  if (s == "none") {
    return FirstPasser::none;
  }
  return std::nullopt;
}

namespace
{

void require_samples(const Trace & trace, std::size_t n)
{
  if (trace.samples.size() < n) {
    throw MalformedTrace("trace has " + std::to_string(trace.samples.size()) + " samples, need " + std::to_string(n));
  }
}

template <typename Inside>
std::vector<Occupancy> occupancy(const Trace & trace, Inside inside)
{
  std::vector<Occupancy> out;
  bool in = false;
  for (const auto & s : trace.samples) {
    const bool now = inside(s);
    if (now && !in) {
      out.push_back({s.t, std::nullopt});
    } else if (!now && in) {
      out.back().end = s.t;
    }
    in = now;
  }
  return out;
}

double separation(const Occupancy & a, const Occupancy & b)
{
  const double inf = std::numeric_limits<double>::infinity();
  const double a_end = a.end.value_or(inf);
  const double b_end = b.end.value_or(inf);
  if (a_end <= b.begin) {
    return b.begin - a_end;
  }
  if (b_end <= a.begin) {
    return a.begin - b_end;
  }
  return 0.0;
}

}  // namespace

std::vector<Occupancy> pedestrian_occupancy(const Trace & trace)
{
  if (trace.config.pedestrian_model == PedestrianModel::none) {
    return {};
  }
  const double hy = conflict_zone(trace.config).y_hi;
  return occupancy(trace, [hy](const Sample & s) { return std::abs(s.pedestrian.y) <= hy; });
}

std::vector<Occupancy> vehicle_occupancy(const Trace & trace)
{
  if (!trace.config.vehicle_present) {
    return {};
  }
  const double hx = conflict_zone(trace.config).x_hi;
  return occupancy(trace, [hx](const Sample & s) { return std::abs(s.vehicle.x) <= hx; });
}

ConflictTimes conflict_times(const Trace & trace)
{
  require_samples(trace, 1);
  ConflictTimes out;
  const auto ped = pedestrian_occupancy(trace);
  if (!ped.empty()) {
    out.ped_entry = ped.front().begin;
    out.ped_exit = ped.front().end;
  }
  const auto veh = vehicle_occupancy(trace);
  if (!veh.empty()) {
    out.veh_entry = veh.front().begin;
    out.veh_exit = veh.front().end;
  }
  return out;
}

bool had_collision(const Trace & trace)
{
  return trace.first_event(EventKind::collision).has_value();
}

std::optional<double> compute_pet(const Trace & trace)
{
  require_samples(trace, 1);
  if (had_collision(trace)) {
    throw Error("PET is undefined for a collision trace");
  }
  const auto ped = pedestrian_occupancy(trace);
  const auto veh = vehicle_occupancy(trace);
  if (ped.empty() || veh.empty()) {
    return std::nullopt;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto & p : ped) {
    best = std::min(best, separation(p, veh.front()));
  }
  return best;
}

FirstPasser first_passer(const Trace & trace)
{
  const auto ped = pedestrian_occupancy(trace);
  const auto veh = vehicle_occupancy(trace);
  if (ped.empty() || veh.empty()) {
    return FirstPasser::none;
  }
  const auto & v = veh.front();
  const auto & p = ped.front();
  if (p.end && *p.end <= v.begin) {
    return FirstPasser::pedestrian;
  }
  if (v.end && *v.end <= p.begin) {
    return FirstPasser::vehicle;
  }
  return FirstPasser::none;
}

std::optional<bool> gap_accepted(const Trace & trace)
{
  require_samples(trace, 1);
  if (had_collision(trace)) {
    return std::nullopt;
  }
  const double hy = conflict_zone(trace.config).y_hi;
  // Time the pedestrian leaves the zone on the far side.
  std::optional<double> far_exit;
  bool inside = false;
  for (const auto & s : trace.samples) {
    const bool now = std::abs(s.pedestrian.y) <= hy;
    if (inside && !now && s.pedestrian.y > hy) {
      far_exit = s.t;
      break;
    }
    inside = now;
  }
  if (!far_exit || trace.config.pedestrian_model == PedestrianModel::none) {
    return std::nullopt;
  }
  const auto veh = vehicle_occupancy(trace);
  if (veh.empty()) {
    return true;
  }
  return *far_exit <= veh.front().begin;
}

double max_deceleration(const Trace & trace)
{
  require_samples(trace, 2);
  const double dt = trace.config.dt;
  double worst = 0.0;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const double decel = -(trace.samples[i].vehicle.v - trace.samples[i - 1].vehicle.v) / dt;
    worst = std::max(worst, decel);
  }
  return worst;
}

std::optional<double> finish_time(const Trace & trace)
{
  const double line = trace.config.finish_line;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const auto & a = trace.samples[i - 1];
    const auto & b = trace.samples[i];
    if (a.vehicle.x < line && b.vehicle.x >= line) {
      const double span = b.vehicle.x - a.vehicle.x;
      const double frac = span > 0.0 ? (line - a.vehicle.x) / span : 1.0;
      return a.t + frac * (b.t - a.t);
    }
  }
  if (!trace.samples.empty() && trace.samples.front().vehicle.x >= line) {
    return trace.samples.front().t;
  }
  return std::nullopt;
}

namespace
{

bool comparable(const ScenarioConfig & a, const ScenarioConfig & b)
{
  const auto & pa = a.controller_params;
  const auto & pb = b.controller_params;
  return a.vehicle_speed == b.vehicle_speed && a.tta == b.tta && a.dt == b.dt &&
         a.finish_line == b.finish_line && a.vehicle_length == b.vehicle_length &&
         a.vehicle_width == b.vehicle_width && a.road_half_width == b.road_half_width &&
         a.ped_radius == b.ped_radius && a.controller == b.controller &&
         a.vehicle_present == b.vehicle_present && pa.target_speed == pb.target_speed &&
         pa.braking_distance == pb.braking_distance && pa.max_brake == pb.max_brake &&
         pa.comfort_accel == pb.comfort_accel && pa.comfort_brake == pb.comfort_brake &&
         pa.prediction_horizon == pb.prediction_horizon && pa.stop_margin == pb.stop_margin &&
         pa.resume_debounce == pb.resume_debounce;
}

}  // namespace

double time_lost(const Trace & interaction, const Trace & free_flow)
{
  if (!comparable(interaction.config, free_flow.config)) {
    throw IncomparableConfigs("interaction and free-flow traces differ beyond pedestrian presence");
  }
  const auto t_int = finish_time(interaction);
  const auto t_free = finish_time(free_flow);
  if (!t_int || !t_free) {
    throw VehicleNeverFinished(
      std::string(!t_int ? "interaction" : "free-flow") + " vehicle never reached the finish line");
  }
  return std::max(0.0, *t_int - *t_free);
}

InteractionOutcome evaluate_outcome(const Trace & trace, const Trace * free_flow)
{
  InteractionOutcome out;
  out.collision = had_collision(trace);
  if (!out.collision) {
    out.pet = compute_pet(trace);
    out.accepted = gap_accepted(trace);
  }
  out.max_decel = max_deceleration(trace);
  out.sudden_change = is_sudden_change(out.max_decel);
  out.first_passer = out.collision ? FirstPasser::none : first_passer(trace);
  if (free_flow != nullptr && !out.collision && finish_time(trace)) {
    out.time_lost = time_lost(trace, *free_flow);
  }
  return out;
}

OutcomeSummary summarize(std::span<const InteractionOutcome> outcomes)
{
  OutcomeSummary s;
  s.trials = outcomes.size();
  if (outcomes.empty()) {
    return s;
  }
  std::size_t accepted = 0;
  std::size_t sudden = 0;
  double pet_sum = 0.0;
  double tl_sum = 0.0;
  std::size_t tl_count = 0;
  for (const auto & o : outcomes) {
    s.collisions += o.collision ? 1 : 0;
    sudden += o.sudden_change ? 1 : 0;
    if (o.accepted) {
      ++s.acceptance_defined;
      accepted += *o.accepted ? 1 : 0;
    }
    if (o.pet) {
      ++s.pet_count;
      pet_sum += *o.pet;
      s.min_pet = s.min_pet ? std::min(*s.min_pet, *o.pet) : *o.pet;
    }
    if (o.time_lost) {
      ++tl_count;
      tl_sum += *o.time_lost;
    }
  }
  const auto n = static_cast<double>(s.trials);
  s.collision_rate = static_cast<double>(s.collisions) / n;
  s.sudden_change_rate = static_cast<double>(sudden) / n;
  if (s.acceptance_defined > 0) {
    s.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(s.acceptance_defined);
  }
  if (s.pet_count > 0) {
    s.mean_pet = pet_sum / static_cast<double>(s.pet_count);
  }
  if (tl_count > 0) {
    s.mean_time_lost = tl_sum / static_cast<double>(tl_count);
  }
  return s;
}

}  // namespace xwalk
