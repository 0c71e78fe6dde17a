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


// xwalk command-line entry point. Exit status: 0 success, 1 usage, parse or
// validation error, 2 runtime failure.

#include "xwalk/config.hpp"
#include "xwalk/engine.hpp"
#include "xwalk/errors.hpp"
#include "xwalk/experiments.hpp"
#include "xwalk/io.hpp"
#include "xwalk/metrics.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace xwalk;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct GlobalOptions
{
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool print_defaults = false;
};

struct SimulateOptions
{
  std::optional<double> tta;
  std::optional<std::string> model;
  std::optional<std::string> controller;
  std::optional<double> braking_distance;
  int individual = -1;
};

struct CommandOptions
{
  std::vector<double> ttas{6.0, 10.0, 14.0, 18.0};
  std::string search_results;
  double threshold = kPetThresholdDefault;
  std::string set_path;
  double braking_distance = ControllerParams{}.braking_distance;
  std::string condition;
  std::vector<std::string> outcomes;
  std::vector<std::string> conditions;
};

std::optional<int> env_int(const char * name)
{
  const char * v = std::getenv(name);
  if (v == nullptr || *v == '\0') {
    return std::nullopt;
  }
  const std::string_view s(v);
  int out = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ValidationError(std::string(name) + " must be an integer");
  }
  return out;
}

/// Effective configuration: file, then environment, then flags.
ExperimentConfig load_config(const GlobalOptions & g)
{
  ExperimentConfig cfg = g.config_path.empty() ? ExperimentConfig{} : parse_config_file(g.config_path);
  if (const auto j = env_int("XWALK_JOBS")) {
    cfg.jobs = *j;
  }
  if (g.jobs) {
    cfg.jobs = *g.jobs;
  }
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.base.seed = *g.seed;
  }
  validate(cfg);
  return cfg;
}

std::string output_dir(const GlobalOptions & g)
{
  if (!g.output_dir.empty()) {
    return g.output_dir;
  }
  if (const char * v = std::getenv("XWALK_OUTPUT_DIR"); v != nullptr && *v != '\0') {
    return v;
  }
  return "xwalk-out";
}

/// Output directory with its manifest already in place.
class Output
{
public:
  Output(const std::string & command, const GlobalOptions & g) : dir_(output_dir(g))
  {
    fs::create_directories(dir_);
    RunManifest m;
    m.command = command;
    m.config_path = g.config_path;
    m.output_dir = dir_;
    m.seed_override = g.seed;
    m.timestamp = manifest_timestamp();
    write("manifest.json", manifest_json(m));
  }

  void write(const std::string & name, const std::string & content) const
  {
    write_file_atomic((fs::path(dir_) / name).string(), content);
  }

private:
  std::string dir_;
};

std::string cell_id(PedestrianModel m, ControllerKind c, double tta)
{
  return std::string(to_string(m)) + ":" + std::string(to_string(c)) + ":" + format_g6(tta);
}

int run_simulate(const GlobalOptions & g, const SimulateOptions & o)
{
  ExperimentConfig cfg = load_config(g);
  ScenarioConfig sc = cfg.base;
  if (o.tta) {
    sc.tta = *o.tta;
  }
  if (o.model) {
    const auto m = parse_pedestrian_model(*o.model);
    if (!m || *m == PedestrianModel::none) {
      throw ValidationError("unknown pedestrian model '" + *o.model + "'");
    }
    sc.pedestrian_model = *m;
  }
  if (o.controller) {
    const auto c = parse_controller_kind(*o.controller);
    if (!c) {
      throw ValidationError("unknown controller '" + *o.controller + "'");
    }
    sc.controller = *c;
  }
  if (o.braking_distance) {
    sc.controller_params.braking_distance = *o.braking_distance;
  }
  validate(sc);
  const IndividualParams individual = o.individual >= 0 ? search_individual(cfg, o.individual) : IndividualParams{};

  Output out("simulate", g);
  const Trace trace = run_trial(sc, individual, cfg.jaywalker);
  const Trace free_flow = run_trial(free_flow_config(sc));
  OutcomeRow row;
  row.scenario_id = "simulate";
  row.individual_id = o.individual;
  row.tta = sc.tta;
  row.seed = sc.seed;
  try {
    row.outcome = evaluate_outcome(trace, &free_flow);
  } catch (const VehicleNeverFinished &) {
    row.outcome = evaluate_outcome(trace);
  }
  out.write("trace.csv", trace_csv(trace));
  out.write("outcomes.csv", outcomes_csv({row}));
  out.write("plot_trajectories.csv", plot_trajectories_csv({{"simulate", &trace}}));
  return kExitOk;
}

int run_benchmark(const GlobalOptions & g, const CommandOptions & o)
{
  const ExperimentConfig cfg = load_config(g);
  Output out("benchmark-2x2", g);
  const auto cells = benchmark_2x2(cfg, o.ttas);

  std::vector<OutcomeRow> rows;
  std::vector<SummaryRow> summary;
  for (const auto & c : cells) {
    const std::string id = cell_id(c.model, c.controller, c.tta);
    summary.push_back({id, c.summary});
    for (const auto & t : c.trials) {
      rows.push_back({id + ":" + std::to_string(t.trial), t.individual_id, c.tta, t.seed, t.outcome});
    }
  }

  // First trial of every model x controller pair at the shortest TTA.
  std::vector<Trace> traces;
  std::vector<std::string> labels;
  for (const auto model : {PedestrianModel::scripted, PedestrianModel::human_like}) {
    for (const auto controller : {ControllerKind::cruise_brake, ControllerKind::foresight_yield}) {
      const ScenarioConfig sc = benchmark_trial_config(cfg, model, controller, o.ttas.front(), 0, 0);
      const IndividualParams p =
        model == PedestrianModel::human_like ? benchmark_individual(cfg, 0) : IndividualParams{};
      traces.push_back(run_trial(sc, p, cfg.jaywalker));
      labels.push_back(cell_id(model, controller, o.ttas.front()));
    }
  }
  std::vector<LabelledTrace> labelled;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    labelled.push_back({labels[i], &traces[i]});
  }

  out.write("outcomes.csv", outcomes_csv(rows));
  out.write("benchmark_summary.csv", summary_csv(summary));
  out.write("plot_metrics_vs_tta.csv", plot_metrics_vs_tta_csv(cells));
  out.write("plot_pet_distribution.csv", plot_pet_distribution_csv(cells));
  out.write("plot_trajectories.csv", plot_trajectories_csv(labelled));
  return kExitOk;
}

int run_search(const GlobalOptions & g)
{
  const ExperimentConfig cfg = load_config(g);
  Output out("adversarial-search", g);
  const SearchOutput s = adversarial_search_tta(cfg);
  std::string log;
  for (const auto & r : s.results) {
    log += optimisation_log_jsonl("adversarial-search", std::to_string(r.individual_id), r.records);
  }
  std::string failures = "# xwalk search_failures v1\nindividual_id,message\n";
  for (const auto & f : s.failures) {
    std::string msg = f.message;
    for (char & ch : msg) {
      if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') {
        ch = ' ';
      }
    }
    failures += std::to_string(f.individual_id) + "," + msg + "\n";
    std::cerr << "individual " << f.individual_id << " failed: " << f.message << "\n";
  }
  out.write("search_results.csv", search_results_csv(s.results));
  out.write("search_failures.csv", failures);
  out.write("optimisation_log.jsonl", log);
  out.write("plot_pet_vs_tta.csv", plot_pet_vs_tta_csv(s.results));
  return kExitOk;
}

int run_build_sets(const GlobalOptions & g, const CommandOptions & o)
{
  const ExperimentConfig cfg = load_config(g);
  const auto results = parse_search_results_csv(read_file(o.search_results));
  Output out("build-sets", g);
  const ScenarioSets sets = build_scenario_sets(results, cfg, cfg.seed, o.threshold);
  out.write("set_low_pet.csv", scenario_set_csv(sets.low_pet));
  out.write("set_random.csv", scenario_set_csv(sets.random));
  out.write("set_jaywalker.csv", scenario_set_csv(sets.jaywalker));
  out.write("set_evaluation.csv", scenario_set_csv(evaluation_set(results)));
  return kExitOk;
}

int run_optimize(const GlobalOptions & g, const CommandOptions & o)
{
  const ExperimentConfig cfg = load_config(g);
  const ScenarioSet set = parse_scenario_set_csv(read_file(o.set_path));
  Output out("optimize-brake", g);
  const BrakeOptimisation b = optimize_braking_distance(cfg, set);
  const std::string label(to_string(set.label));
  std::string csv = "# xwalk brake_optimisation v1\nlabel,d_star_m,objective,feasible_found\n";
  csv += label + "," + format_g17(b.d_star) + "," + format_g6(b.objective) + "," + (b.feasible_found ? "1" : "0") + "\n";
  out.write("brake_optimisation.csv", csv);
  out.write("optimisation_log.jsonl", optimisation_log_jsonl("optimize-brake", label, b.records));
  if (!b.feasible_found) {
    std::cerr << "NoFeasibleCandidate: every braking distance violated a constraint on set '" << label << "'\n";
  }
  std::cout << "d_star = " << format_g6(b.d_star) << " m\n";
  return kExitOk;
}

int run_evaluate(const GlobalOptions & g, const CommandOptions & o)
{
  const ExperimentConfig cfg = load_config(g);
  if (o.braking_distance < kBrakeDistanceMin || o.braking_distance > kBrakeDistanceMax) {
    throw ValidationError("braking distance must lie in [4, 25] m");
  }
  const ScenarioSet set = parse_scenario_set_csv(read_file(o.set_path));
  Output out("evaluate", g);
  const ControllerEvaluation ev = evaluate_controller(cfg, o.braking_distance, set);
  const std::string condition = o.condition.empty() ? "d=" + format_g6(o.braking_distance) : o.condition;

  std::vector<OutcomeRow> rows;
  ConditionPets strip{condition, {}};
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    const auto & e = set.entries[i];
    rows.push_back({std::string(to_string(set.label)) + "-" + std::to_string(e.entry_id), e.individual_id, e.tta, e.seed,
                    ev.entries[i].outcome});
    strip.pets.push_back(ev.entries[i].outcome.pet);
  }
  out.write("outcomes.csv", outcomes_csv(rows));
  out.write("summary.csv", summary_csv({{condition, ev.summary}}));
  out.write("plot_pet_strips.csv", plot_pet_strips_csv({strip}));
  std::cout << summary_csv({{condition, ev.summary}});
  return kExitOk;
}

int run_report(const GlobalOptions & g, const CommandOptions & o)
{
  if (!o.conditions.empty() && o.conditions.size() != o.outcomes.size()) {
    throw ValidationError("--condition must be given once per --outcomes file");
  }
  std::vector<SummaryRow> summary;
  std::vector<ConditionPets> strips;
  for (std::size_t i = 0; i < o.outcomes.size(); ++i) {
    const auto rows = parse_outcomes_csv(read_file(o.outcomes[i]));
    std::vector<InteractionOutcome> outs;
    ConditionPets strip;
    strip.condition = o.conditions.empty() ? fs::path(o.outcomes[i]).parent_path().filename().string() : o.conditions[i];
    if (strip.condition.empty()) {
      strip.condition = fs::path(o.outcomes[i]).stem().string();
    }
    for (const auto & r : rows) {
      outs.push_back(r.outcome);
      strip.pets.push_back(r.outcome.pet);
    }
    summary.push_back({strip.condition, summarize(outs)});
    strips.push_back(std::move(strip));
  }
  Output out("report", g);
  out.write("summary.csv", summary_csv(summary));
  out.write("plot_pet_strips.csv", plot_pet_strips_csv(strips));
  std::cout << summary_csv(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"xwalk: pedestrian-vehicle crossing simulation and adversarial testing"};
  app.set_version_flag("--version", XWALK_VERSION);
  GlobalOptions g;
  app.add_option("-c,--config", g.config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("-o,--output-dir", g.output_dir, "output directory (env XWALK_OUTPUT_DIR, default xwalk-out)");
  app.add_option("--seed", g.seed, "override the master and trial seed");
  app.add_option("-j,--jobs", g.jobs, "worker threads (env XWALK_JOBS)");
  app.add_flag("--print-defaults", g.print_defaults, "print the effective configuration and exit");
  app.require_subcommand(0, 1);
  app.fallthrough();

  SimulateOptions sim;
  CommandOptions cmd;
  auto * simulate = app.add_subcommand("simulate", "run one trial, write its trace and outcome");
  simulate->add_option("--tta", sim.tta, "time to arrival, s");
  simulate->add_option("--model", sim.model, "scripted | human_like | jaywalker");
  simulate->add_option("--controller", sim.controller, "cruise_brake | foresight_yield | constant_speed");
  simulate->add_option("--braking-distance", sim.braking_distance, "m");
  simulate->add_option("--individual", sim.individual, "sampled search individual (default: nominal parameters)");

  auto * bench = app.add_subcommand("benchmark-2x2", "pedestrian model x controller benchmark");
  bench->add_option("--tta", cmd.ttas, "TTA levels, s")->delimiter(',');

  auto * search = app.add_subcommand("adversarial-search", "per-individual minimum-PET TTA search");

  auto * build = app.add_subcommand("build-sets", "low-PET, random, jaywalker and evaluation scenario sets");
  build->add_option("--search-results", cmd.search_results, "search_results.csv")->required()->check(CLI::ExistingFile);
  build->add_option("--threshold", cmd.threshold, "PET threshold of the low-PET set, s");

  auto * optimize = app.add_subcommand("optimize-brake", "constrained braking-distance optimisation on a set");
  optimize->add_option("--set", cmd.set_path, "scenario set CSV")->required()->check(CLI::ExistingFile);

  auto * evaluate = app.add_subcommand("evaluate", "run a scenario set with one braking distance");
  evaluate->add_option("--set", cmd.set_path, "scenario set CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--braking-distance", cmd.braking_distance, "m");
  evaluate->add_option("--condition", cmd.condition, "summary row name");

  auto * report = app.add_subcommand("report", "summary table from outcomes CSVs");
  report->add_option("--outcomes", cmd.outcomes, "outcomes.csv files")->required()->check(CLI::ExistingFile);
  report->add_option("--condition", cmd.conditions, "row name per outcomes file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    if (e.get_exit_code() != 0) {
      std::cerr << app.help();
      return kExitUsage;
    }
    return kExitOk;
  }

  try {
    if (g.print_defaults) {
      std::cout << render_config(load_config(g));
      return kExitOk;
    }
    if (simulate->parsed()) {
      return run_simulate(g, sim);
    }
    if (bench->parsed()) {
      return run_benchmark(g, cmd);
    }
    if (search->parsed()) {
      return run_search(g);
    }
    if (build->parsed()) {
      return run_build_sets(g, cmd);
    }
    if (optimize->parsed()) {
      return run_optimize(g, cmd);
    }
    if (evaluate->parsed()) {
      return run_evaluate(g, cmd);
    }
    if (report->parsed()) {
      return run_report(g, cmd);
    }
    std::cerr << "a subcommand is required\n" << app.help();
    return kExitUsage;
  } catch (const ValidationError & e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError & e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
