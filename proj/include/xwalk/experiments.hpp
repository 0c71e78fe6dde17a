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


#ifndef XWALK__EXPERIMENTS_HPP_
#define XWALK__EXPERIMENTS_HPP_

#include "xwalk/bayesopt.hpp"
#include "xwalk/metrics.hpp"
#include "xwalk/pedestrians.hpp"
#include "xwalk/world.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xwalk
{

inline constexpr double kInfeasiblePenalty = 1e6;
inline constexpr double kPetThresholdDefault = kPetThreshold;

/// Settings shared by every study. `base` supplies geometry, timing and the
/// controller parameters; per-trial fields (tta, seed, model) are overwritten.
struct ExperimentConfig
{
  ScenarioConfig base{};
  PopulationSpec population{};
  JaywalkerParams jaywalker{};
  OptimizeConfig optimiser{};  // bounds are set per study
  std::uint64_t seed = 1;
  int n_individuals = 100;       // adversarial search
  int bench_individuals = 5;     // 2x2 benchmark, human-like
  int bench_repeats = 4;         // 2x2 benchmark, per individual
  int jobs = 1;
};

void validate(const ExperimentConfig & cfg);

// ---------------------------------------------------------------------------
// Seeds. Every trial seed is a function of identifiers only.

std::uint64_t individual_seed(std::uint64_t base, int individual_id);
/// Sampled parameter set of search individual `individual_id`.
IndividualParams search_individual(const ExperimentConfig & cfg, int individual_id);
/// Trial seed of search individual `individual_id`, shared by every TTA.
std::uint64_t search_trial_seed(std::uint64_t base, int individual_id);

// ---------------------------------------------------------------------------
// 2x2 benchmark

struct BenchmarkTrial
{
  int trial = 0;
  int individual_id = -1;  // -1 for scripted
  std::uint64_t seed = 0;
  InteractionOutcome outcome;
};

struct BenchmarkCell
{
  PedestrianModel model = PedestrianModel::human_like;
  ControllerKind controller = ControllerKind::cruise_brake;
  double tta = 0.0;
  OutcomeSummary summary;
  std::vector<BenchmarkTrial> trials;
};

/// All model x controller x TTA cells, human-like cells use
/// bench_individuals x bench_repeats trials and scripted cells the same count.
std::vector<BenchmarkCell> benchmark_2x2(const ExperimentConfig & cfg, const std::vector<double> & ttas);

/// Trial configuration of one benchmark trial.
ScenarioConfig benchmark_trial_config(
  const ExperimentConfig & cfg, PedestrianModel model, ControllerKind controller, double tta, std::size_t tta_index,
  int trial);
IndividualParams benchmark_individual(const ExperimentConfig & cfg, int individual_id);

// ---------------------------------------------------------------------------
// Adversarial TTA search

struct SearchResult
{
  int individual_id = 0;
  IndividualParams params;
  double tta_star = 0.0;
  double pet_star = 0.0;
  bool collision = false;
  std::uint64_t seed = 0;
  std::vector<OptimisationRecord> records;
};

struct SearchFailure
{
  int individual_id = 0;
  std::string message;
};

struct SearchOutput
{
  std::vector<SearchResult> results;
  std::vector<SearchFailure> failures;
};

/// Objective of the TTA search: PET of one trial, 0 for a collision and
/// max_sim_time when the pedestrian never encroaches.
double search_objective(const Trace & trace);

/// PET of one search trial at the given TTA.
double search_pet(const ExperimentConfig & cfg, const IndividualParams & individual, std::uint64_t seed, double tta);

/// Per-individual minimisation of PET over TTA in [6, 18].
SearchOutput adversarial_search_tta(const ExperimentConfig & cfg);

/// Same search with an arbitrary objective of (individual, tta, iteration).
using PetFunction = std::function<double(int individual_id, double tta, int iter)>;
SearchOutput adversarial_search_tta(const ExperimentConfig & cfg, const PetFunction & pet);

// ---------------------------------------------------------------------------
// Scenario sets

enum class SetLabel : std::uint8_t { low_pet, random, jaywalker, evaluation };
std::string_view to_string(SetLabel l);
std::optional<SetLabel> parse_set_label(std::string_view s);

struct ScenarioEntry
{
  int entry_id = 0;
  int individual_id = -1;
  PedestrianModel model = PedestrianModel::human_like;
  IndividualParams individual;
  JaywalkerParams jaywalker;
  double tta = 10.0;
  std::uint64_t seed = 0;
  std::optional<double> provenance_pet;  // PET recorded when the entry was found
};

struct ScenarioSet
{
  SetLabel label = SetLabel::low_pet;
  std::vector<ScenarioEntry> entries;
};

struct ScenarioSets
{
  ScenarioSet low_pet;
  ScenarioSet random;
  ScenarioSet jaywalker;
};

/// low_pet keeps results with PET* below the threshold; random and jaywalker
/// draw the same number of fresh scenarios with TTA ~ U[6, 18] from `seed`.
ScenarioSets build_scenario_sets(
  const std::vector<SearchResult> & results, const ExperimentConfig & cfg, std::uint64_t seed,
  double pet_threshold = kPetThresholdDefault);

/// Every search result as an entry (the default evaluation set).
ScenarioSet evaluation_set(const std::vector<SearchResult> & results);

// ---------------------------------------------------------------------------
// Braking-distance optimisation and evaluation

struct EntryResult
{
  InteractionOutcome outcome;
  bool time_lost_ok = true;  // both runs reached the finish line
};

/// Paired free-flow and interaction runs of one entry with braking distance d.
EntryResult run_entry(const ExperimentConfig & cfg, const ScenarioEntry & entry, double d);

/// Constraint check: no collision, PET >= threshold when present,
/// max decel <= 2.5 m/s^2, vehicle finished in both runs.
bool entry_feasible(const EntryResult & r, double pet_threshold = kPetThresholdDefault);

struct CandidateEvaluation
{
  double objective = kInfeasiblePenalty;
  bool feasible = false;
  int first_violation = -1;  // entry index, -1 when feasible
  int evaluated = 0;
};

/// Evaluates entries in index order in blocks of `jobs`, stopping after the
/// block holding the first violation.
CandidateEvaluation evaluate_candidate(const ExperimentConfig & cfg, const ScenarioSet & set, double d);

struct BrakeOptimisation
{
  double d_star = 0.0;
  double objective = kInfeasiblePenalty;
  bool feasible_found = false;  // false reports NoFeasibleCandidate
  std::vector<OptimisationRecord> records;
};

/// Minimise mean time lost over braking distance in [4, 25] subject to the
/// per-scenario constraints; violations score kInfeasiblePenalty.
BrakeOptimisation optimize_braking_distance(const ExperimentConfig & cfg, const ScenarioSet & set);

/// Generic form over any candidate scorer, used with analytic stubs.
using CandidateScorer = std::function<CandidateEvaluation(double d)>;
BrakeOptimisation optimize_braking_distance(const OptimizeConfig & opt, const CandidateScorer & scorer);

struct ControllerEvaluation
{
  double braking_distance = 0.0;
  OutcomeSummary summary;
  std::vector<EntryResult> entries;
};

/// Runs every entry once with braking distance d.
ControllerEvaluation evaluate_controller(const ExperimentConfig & cfg, double d, const ScenarioSet & set);

}  // namespace xwalk

#endif  // XWALK__EXPERIMENTS_HPP_
