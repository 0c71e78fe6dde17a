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

#include "xwalk/engine.hpp"

#include "xwalk/controllers.hpp"
#include "xwalk/rng.hpp"

#include <algorithm>
#include <cmath>

namespace xwalk
{

namespace
{

constexpr double kParkedX = -1.0e6;

bool pedestrian_finished(const PedestrianState & ped)
{
  return ped.phase == Phase::none || ped.phase == Phase::done || ped.phase == Phase::finished;
}

struct ZoneTracker
{
  bool inside = false;
  void update(bool now_inside, double t, EventKind entry, EventKind exit, std::vector<Event> & out)
  {
    if (now_inside && !inside) {
      out.push_back({t, entry});
    } else if (!now_inside && inside) {
      out.push_back({t, exit});
    }
    inside = now_inside;
  }
};

void record_phase_events(
  const PedestrianState & before, const PedestrianState & after, double t, std::vector<Event> & out)
{
  if (!before.internal.start_pending && after.internal.start_pending) {
    out.push_back({t, EventKind::decision_cross});
  }
  if (after.phase == before.phase) {
    return;
  }
  switch (after.phase) {
    case Phase::waiting:
      if (before.phase != Phase::initialising && before.phase != Phase::none) {
        out.push_back({t, EventKind::decision_wait});
      }
      break;
    case Phase::crossing:
      if (before.phase != Phase::frozen) {
        out.push_back({t, EventKind::crossing_start});
      }
      break;
    case Phase::frozen:
      out.push_back({t, EventKind::freeze_start});
      break;
    case Phase::survival:
      out.push_back({t, EventKind::survival_start});
      break;
    case Phase::done:
    case Phase::finished:
      out.push_back({t, EventKind::crossing_complete});
      break;
    default:
      break;
  }
}

}  // namespace

bool detect_collision(const VehicleState & veh, const PedestrianState & ped, const ScenarioConfig & cfg)
{
  const ConflictZone z = conflict_zone(cfg);
  return std::abs(veh.x) <= z.x_hi && std::abs(ped.y) <= z.y_hi;
}

ScenarioConfig free_flow_config(const ScenarioConfig & cfg)
{
  ScenarioConfig out = cfg;
  out.pedestrian_model = PedestrianModel::none;
  return out;
}

Trace run_trial(
  const ScenarioConfig & cfg, const IndividualParams & individual, const JaywalkerParams & jaywalker)
{
  validate(cfg);
  if (cfg.pedestrian_model == PedestrianModel::human_like) {
    validate(individual);
  } else if (cfg.pedestrian_model == PedestrianModel::jaywalker) {
    validate(jaywalker);
  }

  Trace trace;
  trace.config = cfg;
  const double dt = cfg.dt;
  const auto max_steps = static_cast<long>(std::ceil(cfg.max_sim_time / dt - 1e-9));
  trace.samples.reserve(static_cast<std::size_t>(std::min(max_steps + 1, 20000L)));

  RngStream ped_rng(cfg.seed, RngStream::kPedestrian);
  ControllerState ctrl_state;

  VehicleState veh;
  if (cfg.vehicle_present) {
    veh.x = spawn_position(cfg);
    veh.v = cfg.vehicle_speed;
  } else {
    veh.x = kParkedX;
    veh.v = 0.0;
  }
  PedestrianState ped = initial_pedestrian(cfg);

  trace.samples.push_back({0.0, veh, ped});
  trace.events.push_back({0.0, EventKind::spawn});

  const ConflictZone zone = conflict_zone(cfg);
  ZoneTracker veh_zone;
  ZoneTracker ped_zone;
  const bool has_ped = cfg.pedestrian_model != PedestrianModel::none;
  veh_zone.inside = std::abs(veh.x) <= zone.x_hi;
  ped_zone.inside = has_ped && std::abs(ped.y) <= zone.y_hi;

  bool collided = false;
  double collision_time = 0.0;
  bool vehicle_done = !cfg.vehicle_present;

  for (long k = 1; k <= max_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    VehicleState next_veh = veh;
    PedestrianState next_ped = ped;

    if (!collided) {
      if (cfg.vehicle_present) {
        const bool was_braking = ctrl_state.braking;
        double a = controller_command(cfg.controller, veh, ped, cfg.controller_params, cfg, ctrl_state);
        a = std::clamp(a, kVehicleAccelMin, kVehicleAccelMax);
        next_veh.v = std::max(0.0, veh.v + a * dt);
        next_veh.a = (next_veh.v - veh.v) / dt;
        next_veh.x = veh.x + next_veh.v * dt;
        if (!was_braking && ctrl_state.braking) {
          trace.events.push_back({t, EventKind::brake_onset});
        }
      }
      switch (cfg.pedestrian_model) {
        case PedestrianModel::human_like:
          next_ped = human_step(ped, individual, veh, cfg, ped_rng);
          break;
        case PedestrianModel::scripted:
          next_ped = scripted_step(ped, veh, cfg);
          break;
        case PedestrianModel::jaywalker:
          next_ped = jaywalker_step(ped, jaywalker, veh, cfg, ped_rng);
          break;
        case PedestrianModel::none:
          break;
      }
      record_phase_events(ped, next_ped, t, trace.events);
    } else {
      next_veh.v = 0.0;
      next_veh.a = 0.0;
      next_ped.v = 0.0;
    }

    if (cfg.vehicle_present) {
      veh_zone.update(
        std::abs(next_veh.x) <= zone.x_hi, t, EventKind::veh_conflict_entry,
        EventKind::veh_conflict_exit, trace.events);
    }
    if (has_ped) {
      ped_zone.update(
        std::abs(next_ped.y) <= zone.y_hi, t, EventKind::ped_conflict_entry,
        EventKind::ped_conflict_exit, trace.events);
    }

    if (!collided && has_ped && cfg.vehicle_present && detect_collision(next_veh, next_ped, cfg)) {
      collided = true;
      collision_time = t;
      trace.events.push_back({t, EventKind::collision});
      // Both agents halt on impact.
      next_veh.a = -next_veh.v / dt;
      next_veh.v = 0.0;
      next_ped.v = 0.0;
    }

    if (!vehicle_done && next_veh.x >= cfg.finish_line) {
      vehicle_done = true;
      trace.events.push_back({t, EventKind::vehicle_finished});
    }

    veh = next_veh;
    ped = next_ped;
    trace.samples.push_back({t, veh, ped});

    if (collided) {
      if (t - collision_time >= kCollisionHold - 1e-9) {
        return trace;
      }
      continue;
    }
    if (vehicle_done && pedestrian_finished(ped)) {
      return trace;
    }
  }

  trace.truncated = true;
  trace.events.push_back({trace.samples.back().t, EventKind::truncated});
  return trace;
}

}  // namespace xwalk
