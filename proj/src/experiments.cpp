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


#include "xwalk/experiments.hpp"

#include "xwalk/engine.hpp"
#include "xwalk/errors.hpp"
#include "xwalk/parallel.hpp"
#include "xwalk/rng.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

namespace xwalk
{

namespace
{

// Seed-derivation tags; one per kind of draw.
enum SeedTag : std::uint64_t {
  kTagIndividual = 1,
  kTagSearchTrial = 2,
  kTagSearchOptimiser = 3,
  kTagBenchIndividual = 4,
  kTagBenchTrial = 5,
  kTagRandomTrial = 7,
  kTagJaywalkerTrial = 8,
  kTagBrakeOptimiser = 12,
};

constexpr std::uint64_t kRandomSetStream = 10;
constexpr std::uint64_t kJaywalkerSetStream = 11;

constexpr std::array<std::pair<SetLabel, std::string_view>, 4> kSetLabels{{
  {SetLabel::low_pet, "low_pet"},
  {SetLabel::random, "random"},
  {SetLabel::jaywalker, "jaywalker"},
  {SetLabel::evaluation, "evaluation"},
}};

std::string cell_name(PedestrianModel m, ControllerKind c, double tta)
{
  return "cell (" + std::string(to_string(m)) + ", " + std::string(to_string(c)) + ", tta " +
         std::to_string(tta) + ")";
}

}  // namespace

std::string_view to_string(SetLabel l)
{
  for (const auto & [k, v] : kSetLabels) {
    if (k == l) {
      return v;
    }
  }
  return "unknown";
}

std::optional<SetLabel> parse_set_label(std::string_view s)
{
  for (const auto & [k, v] : kSetLabels) {
    if (v == s) {
      return k;
    }
  }
  return std::nullopt;
}

void validate(const ExperimentConfig & cfg)
{
  validate(cfg.base);
  validate(cfg.population);
  validate(cfg.jaywalker);
  validate(cfg.optimiser);
  if (cfg.n_individuals < 1) {
    throw ValidationError("experiment.n_individuals must be at least 1");
  }
  if (cfg.bench_individuals < 1 || cfg.bench_repeats < 1) {
    throw ValidationError("experiment.bench_individuals and experiment.bench_repeats must be at least 1");
  }
  if (cfg.jobs < 1) {
    throw ValidationError("experiment.jobs must be at least 1");
  }
}

std::uint64_t individual_seed(std::uint64_t base, int individual_id)
{
  return derive_seed(base, {kTagIndividual, static_cast<std::uint64_t>(individual_id)});
}

IndividualParams search_individual(const ExperimentConfig & cfg, int individual_id)
{
  RngStream rng(individual_seed(cfg.seed, individual_id), RngStream::kPopulation);
  return sample_individual(rng, cfg.population);
}

std::uint64_t search_trial_seed(std::uint64_t base, int individual_id)
{
  return derive_seed(base, {kTagSearchTrial, static_cast<std::uint64_t>(individual_id)});
}

// ---------------------------------------------------------------------------

IndividualParams benchmark_individual(const ExperimentConfig & cfg, int individual_id)
{
  RngStream rng(
    derive_seed(cfg.seed, {kTagBenchIndividual, static_cast<std::uint64_t>(individual_id)}), RngStream::kPopulation);
  return sample_individual(rng, cfg.population);
}

ScenarioConfig benchmark_trial_config(
  const ExperimentConfig & cfg, PedestrianModel model, ControllerKind controller, double tta, std::size_t tta_index,
  int trial)
{
  ScenarioConfig sc = cfg.base;
  sc.pedestrian_model = model;
  sc.controller = controller;
  sc.tta = tta;
  // Shared across models and controllers so cells compare like with like.
  sc.seed = derive_seed(cfg.seed, {kTagBenchTrial, tta_index, static_cast<std::uint64_t>(trial)});
  return sc;
}

std::vector<BenchmarkCell> benchmark_2x2(const ExperimentConfig & cfg, const std::vector<double> & ttas)
{
  validate(cfg);
  constexpr std::array<PedestrianModel, 2> kModels{PedestrianModel::scripted, PedestrianModel::human_like};
  constexpr std::array<ControllerKind, 2> kControllers{ControllerKind::cruise_brake, ControllerKind::foresight_yield};
  const int per_cell = cfg.bench_individuals * cfg.bench_repeats;

  std::vector<IndividualParams> individuals;
  for (int m = 0; m < cfg.bench_individuals; ++m) {
    individuals.push_back(benchmark_individual(cfg, m));
  }

  std::vector<BenchmarkCell> cells;
  for (auto model : kModels) {
    for (auto controller : kControllers) {
      for (std::size_t k = 0; k < ttas.size(); ++k) {
        BenchmarkCell c;
        c.model = model;
        c.controller = controller;
        c.tta = ttas[k];
        c.trials.resize(static_cast<std::size_t>(per_cell));
        cells.push_back(std::move(c));
      }
    }
  }

  const std::size_t n_trials = cells.size() * static_cast<std::size_t>(per_cell);
  std::vector<std::string> errors(n_trials);
  parallel_for(n_trials, cfg.jobs, [&](std::size_t flat) {
    const std::size_t ci = flat / static_cast<std::size_t>(per_cell);
    const int r = static_cast<int>(flat % static_cast<std::size_t>(per_cell));
    BenchmarkCell & cell = cells[ci];
    const std::size_t k = ci % ttas.size();
    try {
      const ScenarioConfig sc = benchmark_trial_config(cfg, cell.model, cell.controller, cell.tta, k, r);
      const bool human = cell.model == PedestrianModel::human_like;
      const int ind = human ? r / cfg.bench_repeats : -1;
      const IndividualParams params = human ? individuals[static_cast<std::size_t>(ind)] : IndividualParams{};
      const Trace trace = run_trial(sc, params, cfg.jaywalker);
      BenchmarkTrial & bt = cell.trials[static_cast<std::size_t>(r)];
      bt.trial = r;
      bt.individual_id = ind;
      bt.seed = sc.seed;
      bt.outcome = evaluate_outcome(trace);
    } catch (const std::exception & e) {
      throw Error(cell_name(cell.model, cell.controller, cell.tta) + " trial " + std::to_string(r) + ": " + e.what());
    }
  });

  for (auto & c : cells) {
    std::vector<InteractionOutcome> outs;
    outs.reserve(c.trials.size());
    for (const auto & t : c.trials) {
      outs.push_back(t.outcome);
    }
    c.summary = summarize(outs);
  }
  return cells;
}

// ---------------------------------------------------------------------------

double search_objective(const Trace & trace)
{
  if (had_collision(trace)) {
    return 0.0;
  }
  const std::optional<double> pet = compute_pet(trace);
  return pet ? *pet : trace.config.max_sim_time;
}

double search_pet(const ExperimentConfig & cfg, const IndividualParams & individual, std::uint64_t seed, double tta)
{
  ScenarioConfig sc = cfg.base;
  sc.pedestrian_model = PedestrianModel::human_like;
  sc.controller = ControllerKind::cruise_brake;
  sc.tta = std::clamp(tta, kTtaMin, kTtaMax);
  sc.seed = seed;
  return search_objective(run_trial(sc, individual));
}

SearchOutput adversarial_search_tta(const ExperimentConfig & cfg)
{
  validate(cfg);
  std::vector<IndividualParams> individuals;
  for (int i = 0; i < cfg.n_individuals; ++i) {
    individuals.push_back(search_individual(cfg, i));
  }
  return adversarial_search_tta(cfg, [&](int id, double tta, int) {
    return search_pet(cfg, individuals[static_cast<std::size_t>(id)], search_trial_seed(cfg.seed, id), tta);
  });
}

SearchOutput adversarial_search_tta(const ExperimentConfig & cfg, const PetFunction & pet)
{
  const auto n = static_cast<std::size_t>(cfg.n_individuals);
  std::vector<std::optional<SearchResult>> slots(n);
  std::vector<std::optional<SearchFailure>> failed(n);
  parallel_for(n, cfg.jobs, [&](std::size_t i) {
    const int id = static_cast<int>(i);
    try {
      OptimizeConfig opt = cfg.optimiser;
      opt.lo = kTtaMin;
      opt.hi = kTtaMax;
      opt.seed = derive_seed(cfg.seed, {kTagSearchOptimiser, i});
      MinimizeResult m = minimize([&](double tta, int iter) { return Evaluation(pet(id, tta, iter)); }, opt);
      SearchResult r;
      r.individual_id = id;
      r.params = search_individual(cfg, id);
      r.tta_star = m.x_best;
      r.pet_star = m.y_best;
      r.collision = m.y_best <= 0.0;
      r.seed = search_trial_seed(cfg.seed, id);
      r.records = std::move(m.records);
      slots[i] = std::move(r);
    } catch (const std::exception & e) {
      failed[i] = SearchFailure{id, e.what()};
    }
  });
  SearchOutput out;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      out.results.push_back(std::move(*slots[i]));
    } else if (failed[i]) {
      out.failures.push_back(std::move(*failed[i]));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ScenarioSets build_scenario_sets(
  const std::vector<SearchResult> & results, const ExperimentConfig & cfg, std::uint64_t seed, double pet_threshold)
{
  if (results.empty()) {
    throw ValidationError("build_scenario_sets needs at least one search result");
  }
  ScenarioSets sets;
  sets.low_pet.label = SetLabel::low_pet;
  sets.random.label = SetLabel::random;
  sets.jaywalker.label = SetLabel::jaywalker;
  for (const auto & r : results) {
    if (r.pet_star < pet_threshold) {
      ScenarioEntry e;
      e.entry_id = static_cast<int>(sets.low_pet.entries.size());
      e.individual_id = r.individual_id;
      e.model = PedestrianModel::human_like;
      e.individual = r.params;
      e.tta = r.tta_star;
      e.seed = r.seed;
      e.provenance_pet = r.pet_star;
      sets.low_pet.entries.push_back(e);
    }
  }
  if (sets.low_pet.entries.empty()) {
    throw EmptyLowPetSet("no search result fell below the PET threshold; the pedestrian population needs recalibration");
  }
  const std::size_t n_h = sets.low_pet.entries.size();

  RngStream random_rng(seed, kRandomSetStream);
  RngStream jay_rng(seed, kJaywalkerSetStream);
  for (std::size_t j = 0; j < n_h; ++j) {
    ScenarioEntry e;
    e.entry_id = static_cast<int>(j);
    e.individual_id = static_cast<int>(j);
    e.model = PedestrianModel::human_like;
    e.individual = sample_individual(random_rng, cfg.population);
    e.tta = random_rng.uniform(kTtaMin, kTtaMax);
    e.seed = derive_seed(seed, {kTagRandomTrial, j});
    sets.random.entries.push_back(e);

    ScenarioEntry w;
    w.entry_id = static_cast<int>(j);
    w.model = PedestrianModel::jaywalker;
    w.jaywalker = cfg.jaywalker;
    w.tta = jay_rng.uniform(kTtaMin, kTtaMax);
    w.seed = derive_seed(seed, {kTagJaywalkerTrial, j});
    sets.jaywalker.entries.push_back(w);
  }
  return sets;
}

ScenarioSet evaluation_set(const std::vector<SearchResult> & results)
{
  ScenarioSet s;
  s.label = SetLabel::evaluation;
  for (const auto & r : results) {
    ScenarioEntry e;
    e.entry_id = static_cast<int>(s.entries.size());
    e.individual_id = r.individual_id;
    e.individual = r.params;
    e.tta = r.tta_star;
    e.seed = r.seed;
    e.provenance_pet = r.pet_star;
    s.entries.push_back(e);
  }
  return s;
}

// ---------------------------------------------------------------------------

EntryResult run_entry(const ExperimentConfig & cfg, const ScenarioEntry & entry, double d)
{
  ScenarioConfig sc = cfg.base;
  sc.pedestrian_model = entry.model;
  sc.tta = entry.tta;
  sc.seed = entry.seed;
  sc.controller_params.braking_distance = d;
  const Trace free_flow = run_trial(free_flow_config(sc));
  const Trace trace = run_trial(sc, entry.individual, entry.jaywalker);
  EntryResult r;
  try {
    r.outcome = evaluate_outcome(trace, &free_flow);
    r.time_lost_ok = r.outcome.time_lost.has_value();
  } catch (const VehicleNeverFinished &) {
    r.outcome = evaluate_outcome(trace);
    r.time_lost_ok = false;
  }
  return r;
}

bool entry_feasible(const EntryResult & r, double pet_threshold)
{
  const auto & o = r.outcome;
  if (o.collision || !r.time_lost_ok) {
    return false;
  }
  if (o.pet && *o.pet < pet_threshold) {
    return false;
  }
  return o.max_decel <= kSuddenDecelThreshold;
}

CandidateEvaluation evaluate_candidate(const ExperimentConfig & cfg, const ScenarioSet & set, double d)
{
  CandidateEvaluation ce;
  const std::size_t n = set.entries.size();
  const auto block = static_cast<std::size_t>(std::max(cfg.jobs, 1));
  double total_lost = 0.0;
  for (std::size_t start = 0; start < n; start += block) {
    const std::size_t len = std::min(block, n - start);
    std::vector<EntryResult> out(len);
    parallel_for(len, cfg.jobs, [&](std::size_t k) { out[k] = run_entry(cfg, set.entries[start + k], d); });
    for (std::size_t k = 0; k < len; ++k) {
      ++ce.evaluated;
      if (!entry_feasible(out[k])) {
        ce.first_violation = static_cast<int>(start + k);
        ce.objective = kInfeasiblePenalty;
        ce.feasible = false;
        return ce;
      }
      total_lost += out[k].outcome.time_lost.value_or(0.0);
    }
  }
  ce.feasible = true;
  ce.objective = n > 0 ? total_lost / static_cast<double>(n) : 0.0;
  return ce;
}

BrakeOptimisation optimize_braking_distance(const OptimizeConfig & opt, const CandidateScorer & scorer)
{
  const MinimizeResult m = minimize(
    [&](double d, int) {
      const CandidateEvaluation ce = scorer(d);
      return Evaluation(ce.feasible ? ce.objective : kInfeasiblePenalty, ce.feasible);
    },
    opt);
  BrakeOptimisation b;
  b.d_star = m.x_best;
  b.objective = m.y_best;
  b.records = m.records;
  b.feasible_found = std::any_of(b.records.begin(), b.records.end(), [](const auto & r) { return r.feasible; });
  return b;
}

BrakeOptimisation optimize_braking_distance(const ExperimentConfig & cfg, const ScenarioSet & set)
{
  validate(cfg);
  if (set.entries.empty()) {
    throw ValidationError("optimize_braking_distance needs a non-empty scenario set");
  }
  OptimizeConfig opt = cfg.optimiser;
  opt.lo = kBrakeDistanceMin;
  opt.hi = kBrakeDistanceMax;
  opt.seed = derive_seed(cfg.seed, {kTagBrakeOptimiser, static_cast<std::uint64_t>(set.label)});
  return optimize_braking_distance(opt, [&](double d) { return evaluate_candidate(cfg, set, d); });
}

ControllerEvaluation evaluate_controller(const ExperimentConfig & cfg, double d, const ScenarioSet & set)
{
  ControllerEvaluation ev;
  ev.braking_distance = d;
  ev.entries.resize(set.entries.size());
  parallel_for(set.entries.size(), cfg.jobs, [&](std::size_t i) { ev.entries[i] = run_entry(cfg, set.entries[i], d); });
  std::vector<InteractionOutcome> outs;
  outs.reserve(ev.entries.size());
  for (const auto & e : ev.entries) {
    outs.push_back(e.outcome);
  }
  ev.summary = summarize(outs);
  return ev;
}

}  // namespace xwalk
