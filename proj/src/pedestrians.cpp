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

#include "xwalk/pedestrians.hpp"

#include "xwalk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace xwalk
{

namespace
{

void require(bool ok, const std::string & what)
{
  if (!ok) {
    throw ValidationError(what);
  }
}

double relax(double v, double target, double tau, double dt)
{
  // Exact first-order step; stable for any dt/tau ratio.
  return target + (v - target) * std::exp(-dt / tau);
}

bool accumulating(const PedestrianState & s)
{
  return (s.phase == Phase::approaching || s.phase == Phase::deciding || s.phase == Phase::waiting) &&
         !s.internal.start_pending;
}

}  // namespace

void validate(const IndividualParams & p)
{
  require(p.v_walk >= 0.8 && p.v_walk <= 2.0, "v_walk must lie in [0.8, 2.0] m/s");
  require(p.tau_gap >= 2.0, "tau_gap must be >= 2.0 s");
  require(p.threshold_a > 0.0, "threshold_a must be > 0");
  require(p.k_gain > 0.0, "k_gain must be > 0");
  require(p.sigma_noise >= 0.0, "sigma_noise must be >= 0");
  require(p.weber >= 0.0 && p.weber <= 0.5, "weber must lie in [0, 0.5]");
  require(p.t_react >= 0.0, "t_react must be >= 0");
  require(p.speedup >= 1.0 && p.speedup <= 1.6, "speedup must lie in [1, 1.6]");
}

void validate(const JaywalkerParams & p)
{
  require(p.dash_speed > 0.0 && p.dash_speed <= kPedSpeedMax, "dash_speed must lie in (0, 4] m/s");
  require(p.p_freeze >= 0.0 && p.p_freeze <= 1.0, "p_freeze must lie in [0, 1]");
  require(p.trigger_tta > 0.0, "trigger_tta must be > 0");
  require(p.freeze_duration > 0.0, "freeze_duration must be > 0");
  require(p.ttc_survival > 0.0, "ttc_survival must be > 0");
  require(p.relax_time > 0.0, "relax_time must be > 0");
}

void validate(const PopulationSpec & pop)
{
  auto range = [](double lo, double hi, const char * what) {
    require(lo < hi, std::string("pedestrian.") + what + "_lo must be below " + what + "_hi");
  };
  require(pop.v_walk_sd >= 0.0 && pop.tau_gap_sd >= 0.0, "population standard deviations must be >= 0");
  range(pop.v_walk_lo, pop.v_walk_hi, "v_walk");
  require(pop.v_walk_lo < 2.0 && pop.v_walk_hi > 0.8, "v_walk support must overlap [0.8, 2.0] m/s");
  range(pop.tau_gap_lo, pop.tau_gap_hi, "tau_gap");
  require(pop.tau_gap_hi > 2.0, "tau_gap_hi must exceed 2.0 s");
  range(pop.k_gain_lo, pop.k_gain_hi, "k_gain");
  require(pop.k_gain_lo > 0.0, "k_gain_lo must be > 0");
  range(pop.threshold_lo, pop.threshold_hi, "threshold");
  require(pop.threshold_lo > 0.0, "threshold_lo must be > 0");
  range(pop.sigma_lo, pop.sigma_hi, "sigma");
  require(pop.sigma_lo >= 0.0, "sigma_lo must be >= 0");
  range(pop.weber_lo, pop.weber_hi, "weber");
  require(pop.weber_lo >= 0.0 && pop.weber_hi <= 0.5, "weber support must lie in [0, 0.5]");
  range(pop.t_react_lo, pop.t_react_hi, "t_react");
  require(pop.t_react_lo >= 0.0, "t_react_lo must be >= 0");
  range(pop.speedup_lo, pop.speedup_hi, "speedup");
  require(pop.speedup_lo >= 1.0 && pop.speedup_hi <= 1.6, "speedup support must lie in [1, 1.6]");
}

IndividualParams sample_individual(RngStream & rng, const PopulationSpec & pop)
{
  IndividualParams p;
  p.v_walk = rng.truncated_normal(
    pop.v_walk_mean, pop.v_walk_sd, std::max(pop.v_walk_lo, 0.8), std::min(pop.v_walk_hi, 2.0));
  p.tau_gap = rng.truncated_normal(
    pop.tau_gap_mean, pop.tau_gap_sd, std::max(pop.tau_gap_lo, 2.0), pop.tau_gap_hi);
  p.k_gain = rng.log_uniform(pop.k_gain_lo, pop.k_gain_hi);
  p.threshold_a = rng.uniform(pop.threshold_lo, pop.threshold_hi);
  p.sigma_noise = rng.uniform(pop.sigma_lo, pop.sigma_hi);
  p.weber = rng.uniform(pop.weber_lo, pop.weber_hi);
  p.t_react = rng.uniform(pop.t_react_lo, pop.t_react_hi);
  p.speedup = rng.uniform(pop.speedup_lo, pop.speedup_hi);
  return p;
}

PedestrianState initial_pedestrian(const ScenarioConfig & cfg)
{
  PedestrianState s;
  s.y = -cfg.ped_start_lateral;
  s.v = 0.0;
  switch (cfg.pedestrian_model) {
    case PedestrianModel::human_like:
      s.phase = Phase::approaching;
      break;
    case PedestrianModel::scripted:
      s.phase = Phase::walking;
      break;
    case PedestrianModel::jaywalker:
      s.phase = Phase::initialising;
      break;
    case PedestrianModel::none:
      s.phase = Phase::none;
      break;
  }
  return s;
}

PedestrianState human_step(
  const PedestrianState & state, const IndividualParams & params, const VehicleState & veh,
  const ScenarioConfig & cfg, RngStream & rng)
{
  const double dt = cfg.dt;
  PedestrianState n = state;
  auto & in = n.internal;

  if (accumulating(state)) {
    // Both draws happen every step so the stream advances identically
    // regardless of which branch fires.
    const double zeta = rng.normal();
    const double eta = rng.normal();
    const double tta = time_to_arrival(veh, cfg);
    double perceived = std::isinf(tta) ? kPerceivedTtaCap : tta * (1.0 + params.weber * zeta);
    perceived = std::clamp(perceived, 0.0, kPerceivedTtaCap);
    in.evidence += params.k_gain * (perceived - params.tau_gap) * dt +
                   params.sigma_noise * std::sqrt(dt) * eta;
    if (in.evidence >= params.threshold_a) {
      in.start_pending = true;
      in.timer = params.t_react;
    } else if (in.evidence <= -params.threshold_a) {
      if (n.phase != Phase::waiting) {
        n.phase = Phase::waiting;
        in.evidence = 0.0;
      } else {
        in.evidence = -params.threshold_a;
      }
    }
  }

  if (n.phase == Phase::waiting && !in.start_pending && rear_cleared(veh, cfg, kWaitClearMargin)) {
    in.start_pending = true;
    in.timer = params.t_react;
  }

  if (in.start_pending) {
    in.timer -= dt;
    if (in.timer <= 1e-12) {
      in.start_pending = false;
      in.timer = 0.0;
      n.phase = Phase::crossing;
    }
  }

  const double hold = hold_position(cfg);
  switch (n.phase) {
    case Phase::approaching:
    case Phase::deciding:
    case Phase::waiting: {
      if (n.y >= hold) {
        n.v = 0.0;
        if (n.phase == Phase::approaching) {
          n.phase = Phase::deciding;
        }
        break;
      }
      n.v = relax(n.v, params.v_walk, kHumanRelaxTime, dt);
      n.y += n.v * dt;
      if (n.y >= hold) {
        n.y = hold;
        n.v = 0.0;
        if (n.phase == Phase::approaching) {
          n.phase = Phase::deciding;
        }
      }
      break;
    }
    case Phase::crossing: {
      const double tta = time_to_arrival(veh, cfg);
      const bool vehicle_near = tta <= 2.0 * params.tau_gap;
      const double target = std::min(params.v_walk * (vehicle_near ? params.speedup : 1.0), kPedSpeedMax);
      n.v = relax(n.v, target, kHumanRelaxTime, dt);
      n.y += n.v * dt;
      if (n.y >= far_side(cfg)) {
        n.y = far_side(cfg);
        n.v = 0.0;
        n.phase = Phase::done;
      }
      break;
    }
    default:
      n.v = 0.0;
      break;
  }
  return n;
}

bool scripted_path_blocked(double ped_y, const VehicleState & veh, const ScenarioConfig & cfg)
{
  const double hx = 0.5 * cfg.vehicle_length + kScriptedInflation;
  const double hy = 0.5 * cfg.vehicle_width + kScriptedInflation;
  const bool straddles_line = std::abs(veh.x) <= hx;
  const bool segment_overlaps = ped_y <= hy && ped_y + kScriptedLookahead >= -hy;
  return straddles_line && segment_overlaps;
}

PedestrianState scripted_step(
  const PedestrianState & state, const VehicleState & veh, const ScenarioConfig & cfg)
{
  PedestrianState n = state;
  if (n.phase == Phase::done) {
    n.v = 0.0;
    return n;
  }
  const bool blocked = cfg.vehicle_present && scripted_path_blocked(n.y, veh, cfg);
  n.phase = blocked ? Phase::blocked : Phase::walking;
  n.v = blocked ? 0.0 : kScriptedSpeed;
  n.y += n.v * cfg.dt;
  if (n.y >= far_side(cfg)) {
    n.y = far_side(cfg);
    n.v = 0.0;
    n.phase = Phase::done;
  }
  return n;
}

double instantaneous_ttc(double ped_y, const VehicleState & veh, const ScenarioConfig & cfg)
{
  const double band = 0.5 * cfg.vehicle_width + cfg.ped_radius;
  if (std::abs(ped_y) > band) {
    return kInf;
  }
  return time_to_arrival(veh, cfg);
}

PedestrianState jaywalker_step(
  const PedestrianState & state, const JaywalkerParams & params, const VehicleState & veh,
  const ScenarioConfig & cfg, RngStream & rng)
{
  const double dt = cfg.dt;
  PedestrianState n = state;
  auto & in = n.internal;
  const double tta = time_to_arrival(veh, cfg);
  const bool vehicle_passed = front_gap(veh, cfg) < 0.0;
  const bool road = on_road(n.y, cfg);

  // Transitions.
  switch (n.phase) {
    case Phase::none:
    case Phase::initialising:
      n.phase = Phase::waiting;
      break;
    case Phase::waiting:
      if (tta <= params.trigger_tta && !vehicle_passed) {
        n.phase = Phase::crossing;
        in.freeze_armed = rng.bernoulli(params.p_freeze);
        in.froze = false;
      }
      break;
    case Phase::crossing:
      if (road && in.freeze_armed && !in.froze && tta <= 2.0 * params.ttc_survival) {
        n.phase = Phase::frozen;
        in.froze = true;
        in.timer = params.freeze_duration;
        ++in.freeze_count;
      }
      break;
    case Phase::frozen:
      in.timer -= dt;
      if (in.timer <= 1e-12) {
        in.timer = 0.0;
        n.phase = Phase::crossing;
      }
      break;
    default:
      break;
  }

  if (
    (n.phase == Phase::crossing || n.phase == Phase::frozen) && road && in.survival_count == 0 &&
    instantaneous_ttc(n.y, veh, cfg) < params.ttc_survival)
  {
    n.phase = Phase::survival;
    in.retreating = n.y <= 0.0;
    ++in.survival_count;
  }

  double desired = 0.0;
  double repulsion = 0.0;
  switch (n.phase) {
    case Phase::crossing:
      desired = params.dash_speed;
      break;
    case Phase::survival: {
      const double dir = in.retreating ? -1.0 : 1.0;
      const bool clear = in.retreating ? n.y < -(cfg.road_half_width + cfg.ped_radius) : false;
      desired = clear ? 0.0 : dir * params.dash_speed;
      if (!clear && !vehicle_passed) {
        // Exponential push away from the approaching vehicle front.
        const double gap = std::max(front_gap(veh, cfg), 0.0);
        repulsion = dir * 2.0 * std::exp(-gap / 2.0);
      }
      break;
    }
    default:
      desired = 0.0;
      break;
  }

  if (n.phase == Phase::finished) {
    n.v = 0.0;
    return n;
  }

  n.v += ((desired - n.v) / params.relax_time + repulsion) * dt;
  n.v = std::clamp(n.v, -kPedSpeedMax, kPedSpeedMax);
  n.y += n.v * dt;

  if (n.y >= far_side(cfg)) {
    n.y = far_side(cfg);
    n.v = 0.0;
    n.phase = Phase::finished;
  } else if (
    vehicle_passed && !on_road(n.y, cfg) &&
    (n.phase == Phase::survival || n.phase == Phase::crossing) && n.y < 0.0 && in.retreating)
  {
    n.v = 0.0;
    n.phase = Phase::finished;
  }
  return n;
}

}  // namespace xwalk
