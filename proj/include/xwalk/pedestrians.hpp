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

#ifndef XWALK__PEDESTRIANS_HPP_
#define XWALK__PEDESTRIANS_HPP_

#include "xwalk/rng.hpp"
#include "xwalk/world.hpp"

namespace xwalk
{

/// One human-like individual: walking, perception and decision parameters.
struct IndividualParams
{
  double v_walk = 1.35;      // preferred walking speed, m/s
  double tau_gap = 7.0;      // critical time gap, s
  double k_gain = 0.45;      // evidence gain, 1/s
  double threshold_a = 1.15; // decision threshold
  double sigma_noise = 0.4;  // accumulator noise scale
  double weber = 0.15;       // multiplicative TTA perception noise
  double t_react = 0.4;      // motor initiation delay, s
  double speedup = 1.25;     // crossing-speed multiplier with a vehicle near
};

void validate(const IndividualParams & p);

/// Population the individuals are drawn from.
struct PopulationSpec
{
  double v_walk_mean = 1.35;
  double v_walk_sd = 0.2;
  double v_walk_lo = 0.8;
  double v_walk_hi = 2.0;
  double tau_gap_mean = 7.0;
  double tau_gap_sd = 2.5;
  double tau_gap_lo = 2.0;
  double tau_gap_hi = 16.0;
  double k_gain_lo = 0.2;
  double k_gain_hi = 1.0;
  double threshold_lo = 0.8;
  double threshold_hi = 1.5;
  double sigma_lo = 0.2;
  double sigma_hi = 0.6;
  double weber_lo = 0.05;
  double weber_hi = 0.25;
  double t_react_lo = 0.2;
  double t_react_hi = 0.6;
  double speedup_lo = 1.0;
  double speedup_hi = 1.5;
};

void validate(const PopulationSpec & pop);

/// Draw one individual; every field lands inside the IndividualParams bounds.
IndividualParams sample_individual(RngStream & rng, const PopulationSpec & pop = {});

enum class RiskMode : std::uint8_t { risk };

struct JaywalkerParams
{
  double trigger_tta = 3.0;      // s
  double dash_speed = 3.5;       // m/s
  double p_freeze = 0.5;         // per crossing
  double freeze_duration = 1.0;  // s
  double ttc_survival = 1.0;     // s
  double relax_time = 0.3;       // s
  RiskMode risk_mode = RiskMode::risk;
};

void validate(const JaywalkerParams & p);

// Fixed constants of the human-like model.
inline constexpr double kHoldSetback = 1.0;      // waiting spot behind the kerb edge, m
inline constexpr double kHumanRelaxTime = 0.5;   // speed relaxation, s
inline constexpr double kWaitClearMargin = 0.5;  // rear clearance before a waiter goes, m
inline constexpr double kPerceivedTtaCap = 60.0; // stands in for "no vehicle coming", s

// Scripted walker.
inline constexpr double kScriptedSpeed = 1.4;      // m/s
inline constexpr double kScriptedInflation = 0.5;  // m
inline constexpr double kScriptedLookahead = 1.5;  // m

/// Kerbside spot where a human-like pedestrian stops to wait or deliberate.
inline double hold_position(const ScenarioConfig & cfg) { return -(cfg.road_half_width + kHoldSetback); }

inline double far_side(const ScenarioConfig & cfg) { return cfg.ped_start_lateral; }

PedestrianState initial_pedestrian(const ScenarioConfig & cfg);

/// Sequential-sampling gap decision followed by the crossing itself.
PedestrianState human_step(
  const PedestrianState & state, const IndividualParams & params, const VehicleState & veh,
  const ScenarioConfig & cfg, RngStream & rng);

/// Constant-speed walker that only halts when the vehicle blocks the path ahead.
PedestrianState scripted_step(
  const PedestrianState & state, const VehicleState & veh, const ScenarioConfig & cfg);

/// True when the inflated vehicle footprint overlaps the walker's look-ahead segment.
bool scripted_path_blocked(double ped_y, const VehicleState & veh, const ScenarioConfig & cfg);

/// Six-state adversarial walker.
PedestrianState jaywalker_step(
  const PedestrianState & state, const JaywalkerParams & params, const VehicleState & veh,
  const ScenarioConfig & cfg, RngStream & rng);

/// Time until the vehicle front reaches the pedestrian, counted only when the
/// pedestrian stands inside the vehicle's swept band.
double instantaneous_ttc(double ped_y, const VehicleState & veh, const ScenarioConfig & cfg);

}  // namespace xwalk

#endif  // XWALK__PEDESTRIANS_HPP_
