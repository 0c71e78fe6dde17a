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


#ifndef XWALK__IO_HPP_
#define XWALK__IO_HPP_

#include "xwalk/experiments.hpp"
#include "xwalk/metrics.hpp"
#include "xwalk/world.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xwalk
{

// Every CSV starts with a "# xwalk <kind> v<N>" line followed by a header
// row. Metric values use 6 significant digits. Scenario and search files
// carry replay inputs (parameters, TTA) at 17 digits so that a set read back
// reproduces the runs bit for bit. Absent optionals are empty cells.

inline constexpr int kCsvVersion = 1;

std::string format_g6(double v);
std::string format_g17(double v);

std::string trace_csv(const Trace & trace);

struct OutcomeRow
{
  std::string scenario_id;
  int individual_id = -1;
  double tta = 0.0;
  std::uint64_t seed = 0;
  InteractionOutcome outcome;
};

std::string outcomes_csv(const std::vector<OutcomeRow> & rows);
std::vector<OutcomeRow> parse_outcomes_csv(std::string_view text);

struct SummaryRow
{
  std::string condition;
  OutcomeSummary summary;
};

/// Columns: condition, n, Mean PET (s), Min PET (s),
/// Sudden speed change rate (%), Average vehicle time lost (s), collisions.
std::string summary_csv(const std::vector<SummaryRow> & rows);
/// Reads back the columns summary_csv writes; other summary fields stay zero.
std::vector<SummaryRow> parse_summary_csv(std::string_view text);

std::string scenario_set_csv(const ScenarioSet & set);
ScenarioSet parse_scenario_set_csv(std::string_view text);

/// Search outcomes without the per-iteration records.
std::string search_results_csv(const std::vector<SearchResult> & results);
std::vector<SearchResult> parse_search_results_csv(std::string_view text);

/// One JSON object per record: {"study", "key", "iter", "candidate",
/// "objective", "feasible", "best_so_far"}.
std::string optimisation_log_jsonl(
  std::string_view study, std::string_view key, const std::vector<OptimisationRecord> & records);

struct RunManifest
{
  std::string command;
  std::string config_path;  // empty when built-in defaults were used
  std::string output_dir;
  std::optional<std::uint64_t> seed_override;
  std::string timestamp;  // ISO 8601 UTC
  std::string tool_version = XWALK_VERSION;
};

/// SOURCE_DATE_EPOCH when set (reproducible builds convention), wall clock
/// otherwise.
std::string manifest_timestamp();
std::string manifest_json(const RunManifest & m);

/// Writes through a sibling temporary and renames over `path`.
void write_file_atomic(const std::string & path, std::string_view content);
std::string read_file(const std::string & path);

// -- plot data --------------------------------------------------------------

/// Rates and PET statistics per benchmark cell against TTA.
std::string plot_metrics_vs_tta_csv(const std::vector<BenchmarkCell> & cells);
/// One row per benchmark trial with a PET.
std::string plot_pet_distribution_csv(const std::vector<BenchmarkCell> & cells);

struct LabelledTrace
{
  std::string label;
  const Trace * trace = nullptr;
};

/// Vehicle and pedestrian distances to the conflict point per sample.
std::string plot_trajectories_csv(const std::vector<LabelledTrace> & traces);
/// TTA* and PET* per searched individual.
std::string plot_pet_vs_tta_csv(const std::vector<SearchResult> & results);

struct ConditionPets
{
  std::string condition;
  std::vector<std::optional<double>> pets;  // per entry
};

std::string plot_pet_strips_csv(const std::vector<ConditionPets> & conditions);

}  // namespace xwalk

#endif  // XWALK__IO_HPP_
