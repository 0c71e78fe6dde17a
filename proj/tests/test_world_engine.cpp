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
#include "xwalk/errors.hpp"
#include "xwalk/metrics.hpp"
#include "xwalk/world.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace xwalk;

TEST(ConflictZone, DefaultFootprint)
{
  const ConflictZone z = conflict_zone(ScenarioConfig{});
  EXPECT_DOUBLE_EQ(z.x_lo, -2.55);
  EXPECT_DOUBLE_EQ(z.x_hi, 2.55);
  EXPECT_DOUBLE_EQ(z.y_lo, -1.3);
  EXPECT_DOUBLE_EQ(z.y_hi, 1.3);
}

TEST(ConflictZone, DegenerateFootprint)
{
  ScenarioConfig cfg;
  cfg.vehicle_length = 0.0;
  cfg.vehicle_width = 0.0;
  cfg.ped_radius = 0.0;
  const ConflictZone z = conflict_zone(cfg);
  EXPECT_EQ(z.x_lo, 0.0);
  EXPECT_EQ(z.x_hi, 0.0);
  EXPECT_EQ(z.y_lo, 0.0);
  EXPECT_EQ(z.y_hi, 0.0);
}

TEST(ConflictZone, DoublingRadiusWidensBothAxes)
{
  ScenarioConfig a;
  ScenarioConfig b = a;
  b.ped_radius = 2.0 * a.ped_radius;
  const double dr = b.ped_radius - a.ped_radius;
  const ConflictZone za = conflict_zone(a);
  const ConflictZone zb = conflict_zone(b);
  EXPECT_NEAR((zb.x_hi - zb.x_lo) - (za.x_hi - za.x_lo), 2.0 * dr, 1e-12);
  EXPECT_NEAR((zb.y_hi - zb.y_lo) - (za.y_hi - za.y_lo), 2.0 * dr, 1e-12);
}

TEST(ScenarioConfig, SpawnIdentity)
{
  for (const double tta : {6.0, 7.3, 10.0, 14.0, 18.0}) {
    ScenarioConfig cfg;
    cfg.tta = tta;
    EXPECT_NEAR(std::abs(spawn_position(cfg)) / cfg.vehicle_speed, tta, 1e-12);
  }
}

TEST(ScenarioConfig, ValidationRejectsOutOfRange)
{
  EXPECT_NO_THROW(validate(ScenarioConfig{}));
  auto bad = [](auto mutate) {
    ScenarioConfig cfg;
    mutate(cfg);
    EXPECT_THROW(validate(cfg), ValidationError);
  };
  bad([](ScenarioConfig & c) { c.vehicle_speed = 0.0; });
  bad([](ScenarioConfig & c) { c.tta = 5.9; });
  bad([](ScenarioConfig & c) { c.tta = 18.1; });
  bad([](ScenarioConfig & c) { c.dt = 0.0; });
  bad([](ScenarioConfig & c) { c.dt = 0.11; });
  bad([](ScenarioConfig & c) { c.vehicle_length = 0.0; });
  bad([](ScenarioConfig & c) { c.road_half_width = 0.9; });
  bad([](ScenarioConfig & c) { c.ped_start_lateral = c.road_half_width; });
  bad([](ScenarioConfig & c) { c.controller_params.braking_distance = 3.9; });
  bad([](ScenarioConfig & c) { c.controller_params.braking_distance = 25.1; });
  bad([](ScenarioConfig & c) { c.controller_params.max_brake = 8.5; });
  bad([](ScenarioConfig & c) { c.controller_params.comfort_brake = 2.6; });
}

TEST(ScenarioConfig, BrakingDistanceMessageCitesRange)
{
  ScenarioConfig cfg;
  cfg.controller_params.braking_distance = 30.0;
  try {
    validate(cfg);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError & e) {
    EXPECT_NE(std::string(e.what()).find("[4, 25]"), std::string::npos) << e.what();
  }
}

TEST(Names, RoundTrip)
{
  for (const auto m : {PedestrianModel::scripted, PedestrianModel::human_like, PedestrianModel::jaywalker}) {
    EXPECT_EQ(parse_pedestrian_model(to_string(m)), m);
  }
  for (const auto c : {ControllerKind::cruise_brake, ControllerKind::foresight_yield, ControllerKind::constant_speed}) {
    EXPECT_EQ(parse_controller_kind(to_string(c)), c);
  }
  EXPECT_FALSE(parse_pedestrian_model("robot").has_value());
  EXPECT_FALSE(parse_controller_kind("autopilot").has_value());
}

TEST(TimeToArrival, Cases)
{
  const ScenarioConfig cfg;
  VehicleState v{-50.0, 10.0, 0.0};
  EXPECT_NEAR(time_to_arrival(v, cfg), (50.0 - 2.25) / 10.0, 1e-12);
  v.v = 0.0;
  EXPECT_TRUE(std::isinf(time_to_arrival(v, cfg)));
  v = {0.0, 8.0, 0.0};  // straddling the crossing line
  EXPECT_EQ(time_to_arrival(v, cfg), 0.0);
  v = {10.0, 8.0, 0.0};  // rear past the line
  EXPECT_TRUE(std::isinf(time_to_arrival(v, cfg)));
}

TEST(DetectCollision, SpecCases)
{
  const ScenarioConfig cfg;
  PedestrianState p;
  p.y = 0.0;
  EXPECT_TRUE(detect_collision({0.0, 0.0, 0.0}, p, cfg));
  EXPECT_FALSE(detect_collision({10.0, 0.0, 0.0}, p, cfg));
  p.y = 1.3;
  EXPECT_TRUE(detect_collision({2.55, 0.0, 0.0}, p, cfg));
  p.y = 1.31;
  EXPECT_FALSE(detect_collision({2.55, 0.0, 0.0}, p, cfg));
}

TEST(RunTrial, FreeFlowTravelTime)
{
  ScenarioConfig cfg;
  cfg.tta = 6.0;  // x0 = -50
  cfg.pedestrian_model = PedestrianModel::none;
  const Trace tr = run_trial(cfg);
  ASSERT_NEAR(tr.samples.front().vehicle.x, -50.0, 1e-9);
  for (const auto & s : tr.samples) {
    EXPECT_NEAR(s.vehicle.v, 25.0 / 3.0, 1e-12);
  }
  const auto t = finish_time(tr);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 80.0 / (25.0 / 3.0), cfg.dt);
}

TEST(RunTrial, ScriptedWalkerWithoutVehicle)
{
  ScenarioConfig cfg;
  cfg.pedestrian_model = PedestrianModel::scripted;
  cfg.vehicle_present = false;
  const Trace tr = run_trial(cfg);
  const auto done = tr.first_event(EventKind::crossing_complete);
  ASSERT_TRUE(done.has_value());
  EXPECT_NEAR(*done, 8.0 / 1.4, cfg.dt);
}

TEST(RunTrial, DeterministicForSameSeed)
{
  ScenarioConfig cfg;
  cfg.pedestrian_model = PedestrianModel::human_like;
  cfg.seed = 99;
  cfg.tta = 7.0;
  const Trace a = run_trial(cfg);
  const Trace b = run_trial(cfg);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].vehicle.x, b.samples[i].vehicle.x);
    EXPECT_EQ(a.samples[i].pedestrian.y, b.samples[i].pedestrian.y);
    EXPECT_EQ(a.samples[i].pedestrian.phase, b.samples[i].pedestrian.phase);
  }
  ASSERT_EQ(a.events.size(), b.events.size());
}

TEST(RunTrial, TimestampsStrictlyIncreaseByDt)
{
  ScenarioConfig cfg;
  cfg.pedestrian_model = PedestrianModel::jaywalker;
  cfg.seed = 3;
  const Trace tr = run_trial(cfg);
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    EXPECT_NEAR(tr.samples[i].t - tr.samples[i - 1].t, cfg.dt, 1e-9);
  }
  for (const auto & e : tr.events) {
    EXPECT_GE(e.t, 0.0);
    EXPECT_LE(e.t, cfg.max_sim_time + 1e-9);
  }
}

TEST(RunTrial, CollisionFreezesBothAgents)
{
  // Constant-speed vehicle and a scripted walker timed to meet at the origin.
  ScenarioConfig cfg;
  cfg.pedestrian_model = PedestrianModel::scripted;
  cfg.controller = ControllerKind::constant_speed;
  // Vehicle enters the zone at 5.69 s; the walker occupies it over [4.79, 6.64] s
  // and halts mid-zone once the vehicle straddles the line.
  cfg.tta = 6.0;
  cfg.ped_start_lateral = 8.0;
  const Trace tr = run_trial(cfg);
  const auto hit = tr.first_event(EventKind::collision);
  ASSERT_TRUE(hit.has_value());
  for (const auto & s : tr.samples) {
    if (s.t > *hit + 1e-9) {
      EXPECT_EQ(s.vehicle.v, 0.0);
      EXPECT_EQ(s.pedestrian.v, 0.0);
    }
  }
}

TEST(RunTrial, MaxSimTimeTruncates)
{
  ScenarioConfig cfg;
  cfg.pedestrian_model = PedestrianModel::human_like;
  cfg.max_sim_time = 3.0;
  const Trace tr = run_trial(cfg);
  EXPECT_TRUE(tr.truncated);
  EXPECT_LE(tr.samples.back().t, 3.0 + 1e-9);
}
