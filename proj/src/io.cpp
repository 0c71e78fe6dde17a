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


#include "xwalk/io.hpp"

#include "xwalk/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace xwalk
{

namespace
{

std::string header_line(std::string_view kind) { return "# xwalk " + std::string(kind) + " v" + std::to_string(kCsvVersion) + "\n"; }

std::string opt6(const std::optional<double> & v) { return v ? format_g6(*v) : std::string(); }

std::string opt_bool(const std::optional<bool> & v) { return v ? (*v ? "1" : "0") : std::string(); }

std::vector<std::string> split(std::string_view line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) {
      return out;
    }
    start = comma + 1;
  }
}

void check_field(std::string_view s)
{
  if (s.find_first_of(",\n\r\"") != std::string_view::npos) {
    throw ValidationError("CSV field contains a separator: '" + std::string(s) + "'");
  }
}

/// Header-indexed rows of one versioned CSV kind.
class CsvTable
{
public:
  CsvTable(std::string_view text, std::string_view kind)
  {
    std::istringstream in{std::string(text)};
    std::string line;
    int n = 0;
    const std::string expect = header_line(kind);
    bool versioned = false;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') {
        line.pop_back();
      }
      if (line.empty()) {
        continue;
      }
      if (line.front() == '#') {
        if (n == 1) {
          if (line + "\n" != expect && line.rfind(expect.substr(0, expect.size() - 1) + " ", 0) != 0) {
            throw ParseError("expected '" + expect.substr(0, expect.size() - 1) + "'", n);
          }
          versioned = true;
          comment_ = line;
        }
        continue;
      }
      if (!versioned) {
        throw ParseError("missing '" + expect.substr(0, expect.size() - 1) + "' line", n);
      }
      auto cells = split(line);
      if (header_.empty()) {
        header_ = std::move(cells);
        for (std::size_t i = 0; i < header_.size(); ++i) {
          index_[header_[i]] = i;
        }
        continue;
      }
      if (cells.size() != header_.size()) {
        throw ParseError("expected " + std::to_string(header_.size()) + " fields", n);
      }
      rows_.push_back(std::move(cells));
      lines_.push_back(n);
    }
    if (header_.empty()) {
      throw ParseError("missing header row", n);
    }
  }

  std::size_t size() const { return rows_.size(); }
  const std::string & comment() const { return comment_; }

  const std::string & cell(std::size_t row, const std::string & column) const
  {
    const auto it = index_.find(column);
    if (it == index_.end()) {
      throw ParseError("missing column '" + column + "'", 1);
    }
    return rows_[row][it->second];
  }

  double real(std::size_t row, const std::string & column) const
  {
    const auto & s = cell(row, column);
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      throw ParseError("bad number '" + s + "' in column '" + column + "'", lines_[row]);
    }
    return v;
  }

  std::optional<double> opt_real(std::size_t row, const std::string & column) const
  {
    if (cell(row, column).empty()) {
      return std::nullopt;
    }
    return real(row, column);
  }

  template <class Int>
  Int integer(std::size_t row, const std::string & column) const
  {
    const auto & s = cell(row, column);
    Int v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      throw ParseError("bad integer '" + s + "' in column '" + column + "'", lines_[row]);
    }
    return v;
  }

  bool boolean(std::size_t row, const std::string & column) const
  {
    const auto b = opt_boolean(row, column);
    if (!b) {
      throw ParseError("empty flag in column '" + column + "'", lines_[row]);
    }
    return *b;
  }

  std::optional<bool> opt_boolean(std::size_t row, const std::string & column) const
  {
    const auto & s = cell(row, column);
    if (s.empty()) {
      return std::nullopt;
    }
    if (s == "1") {
      return true;
    }
    if (s == "0") {
      return false;
    }
    throw ParseError("bad flag '" + s + "' in column '" + column + "'", lines_[row]);
  }

  int line(std::size_t row) const { return lines_[row]; }

private:
  std::string comment_;
  std::vector<std::string> header_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<int> lines_;
};

const char * const kParamColumns[] = {"v_walk", "tau_gap", "k_gain", "threshold_a", "sigma_noise", "weber", "t_react", "speedup"};

std::string params_row(const IndividualParams & p)
{
  std::string s;
  for (const double v : {p.v_walk, p.tau_gap, p.k_gain, p.threshold_a, p.sigma_noise, p.weber, p.t_react, p.speedup}) {
    s += "," + format_g17(v);
  }
  return s;
}

IndividualParams read_params(const CsvTable & t, std::size_t r)
{
  IndividualParams p;
  p.v_walk = t.real(r, "v_walk");
  p.tau_gap = t.real(r, "tau_gap");
  p.k_gain = t.real(r, "k_gain");
  p.threshold_a = t.real(r, "threshold_a");
  p.sigma_noise = t.real(r, "sigma_noise");
  p.weber = t.real(r, "weber");
  p.t_react = t.real(r, "t_react");
  p.speedup = t.real(r, "speedup");
  return p;
}

std::string params_header()
{
  std::string s;
  for (const char * c : kParamColumns) {
    s += ",";
    s += c;
  }
  return s;
}

double round6(double v) { return std::strtod(format_g6(v).c_str(), nullptr); }

}  // namespace

std::string format_g6(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

std::string format_g17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string trace_csv(const Trace & trace)
{
  std::string out = header_line("trace");
  out += "t,veh_x,veh_v,veh_a,ped_y,ped_v,ped_phase\n";
  for (const auto & s : trace.samples) {
    out += format_g6(s.t) + "," + format_g6(s.vehicle.x) + "," + format_g6(s.vehicle.v) + "," + format_g6(s.vehicle.a) +
           "," + format_g6(s.pedestrian.y) + "," + format_g6(s.pedestrian.v) + "," +
           std::string(to_string(s.pedestrian.phase)) + "\n";
  }
  return out;
}

std::string outcomes_csv(const std::vector<OutcomeRow> & rows)
{
  std::string out = header_line("outcomes");
  out +=
    "scenario_id,individual_id,tta_s,seed,pet_s,accepted,collision,max_decel_mps2,sudden_change,time_lost_s,"
    "first_passer\n";
  for (const auto & r : rows) {
    check_field(r.scenario_id);
    const auto & o = r.outcome;
    out += r.scenario_id + "," + std::to_string(r.individual_id) + "," + format_g6(r.tta) + "," +
           std::to_string(r.seed) + "," + opt6(o.pet) + "," + opt_bool(o.accepted) + "," +
           (o.collision ? "1" : "0") + "," + format_g6(o.max_decel) + "," + (o.sudden_change ? "1" : "0") + "," +
           opt6(o.time_lost) + "," + std::string(to_string(o.first_passer)) + "\n";
  }
  return out;
}

std::vector<OutcomeRow> parse_outcomes_csv(std::string_view text)
{
  const CsvTable t(text, "outcomes");
  std::vector<OutcomeRow> rows;
  rows.reserve(t.size());
  for (std::size_t r = 0; r < t.size(); ++r) {
    OutcomeRow row;
    row.scenario_id = t.cell(r, "scenario_id");
    row.individual_id = t.integer<int>(r, "individual_id");
    row.tta = t.real(r, "tta_s");
    row.seed = t.integer<std::uint64_t>(r, "seed");
    auto & o = row.outcome;
    o.pet = t.opt_real(r, "pet_s");
    o.accepted = t.opt_boolean(r, "accepted");
    o.collision = t.boolean(r, "collision");
    o.max_decel = t.real(r, "max_decel_mps2");
    o.sudden_change = t.boolean(r, "sudden_change");
    o.time_lost = t.opt_real(r, "time_lost_s");
    const auto fp = parse_first_passer(t.cell(r, "first_passer"));
    if (!fp) {
      throw ParseError("bad first_passer '" + t.cell(r, "first_passer") + "'", t.line(r));
    }
    o.first_passer = *fp;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_csv(const std::vector<SummaryRow> & rows)
{
  std::string out = header_line("summary");
  out +=
    "condition,n,Mean PET (s),Min PET (s),Sudden speed change rate (%),Average vehicle time lost (s),collisions\n";
  for (const auto & r : rows) {
    check_field(r.condition);
    const auto & s = r.summary;
    out += r.condition + "," + std::to_string(s.trials) + "," + opt6(s.mean_pet) + "," + opt6(s.min_pet) + "," +
           format_g6(100.0 * s.sudden_change_rate) + "," + opt6(s.mean_time_lost) + "," +
           std::to_string(s.collisions) + "\n";
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text)
{
  const CsvTable t(text, "summary");
  std::vector<SummaryRow> rows;
  for (std::size_t r = 0; r < t.size(); ++r) {
    SummaryRow row;
    row.condition = t.cell(r, "condition");
    auto & s = row.summary;
    s.trials = t.integer<std::size_t>(r, "n");
    s.mean_pet = t.opt_real(r, "Mean PET (s)");
    s.min_pet = t.opt_real(r, "Min PET (s)");
    s.sudden_change_rate = t.real(r, "Sudden speed change rate (%)") / 100.0;
    s.mean_time_lost = t.opt_real(r, "Average vehicle time lost (s)");
    s.collisions = t.integer<std::size_t>(r, "collisions");
    s.collision_rate = s.trials > 0 ? static_cast<double>(s.collisions) / static_cast<double>(s.trials) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string scenario_set_csv(const ScenarioSet & set)
{
  std::string out = "# xwalk scenario_set v" + std::to_string(kCsvVersion) + " label=" + std::string(to_string(set.label)) + "\n";
  out += "entry_id,individual_id,model,tta_s,seed,provenance_pet_s" + params_header() +
         ",jw_trigger_tta,jw_dash_speed,jw_p_freeze,jw_freeze_duration,jw_ttc_survival,jw_relax_time\n";
  for (const auto & e : set.entries) {
    const auto & j = e.jaywalker;
    out += std::to_string(e.entry_id) + "," + std::to_string(e.individual_id) + "," + std::string(to_string(e.model)) +
           "," + format_g17(e.tta) + "," + std::to_string(e.seed) + "," +
           (e.provenance_pet ? format_g17(*e.provenance_pet) : std::string()) + params_row(e.individual);
    for (const double v : {j.trigger_tta, j.dash_speed, j.p_freeze, j.freeze_duration, j.ttc_survival, j.relax_time}) {
      out += "," + format_g17(v);
    }
    out += "\n";
  }
  return out;
}

ScenarioSet parse_scenario_set_csv(std::string_view text)
{
  const CsvTable t(text, "scenario_set");
  ScenarioSet set;
  const auto pos = t.comment().find("label=");
  if (pos == std::string::npos) {
    throw ParseError("scenario set without label", 1);
  }
  const auto label = parse_set_label(t.comment().substr(pos + 6));
  if (!label) {
    throw ParseError("unknown set label '" + t.comment().substr(pos + 6) + "'", 1);
  }
  set.label = *label;
  for (std::size_t r = 0; r < t.size(); ++r) {
    ScenarioEntry e;
    e.entry_id = t.integer<int>(r, "entry_id");
    e.individual_id = t.integer<int>(r, "individual_id");
    const auto model = parse_pedestrian_model(t.cell(r, "model"));
    if (!model || *model == PedestrianModel::none) {
      throw ParseError("bad model '" + t.cell(r, "model") + "'", t.line(r));
    }
    e.model = *model;
    e.tta = t.real(r, "tta_s");
    e.seed = t.integer<std::uint64_t>(r, "seed");
    e.provenance_pet = t.opt_real(r, "provenance_pet_s");
    e.individual = read_params(t, r);
    e.jaywalker.trigger_tta = t.real(r, "jw_trigger_tta");
    e.jaywalker.dash_speed = t.real(r, "jw_dash_speed");
    e.jaywalker.p_freeze = t.real(r, "jw_p_freeze");
    e.jaywalker.freeze_duration = t.real(r, "jw_freeze_duration");
    e.jaywalker.ttc_survival = t.real(r, "jw_ttc_survival");
    e.jaywalker.relax_time = t.real(r, "jw_relax_time");
    try {
      validate(e.individual);
      validate(e.jaywalker);
    } catch (const ValidationError & err) {
      throw ParseError(err.what(), t.line(r));
    }
    set.entries.push_back(e);
  }
  return set;
}

std::string search_results_csv(const std::vector<SearchResult> & results)
{
  std::string out = header_line("search_results");
  out += "individual_id,seed,tta_star_s,pet_star_s,collision" + params_header() + "\n";
  for (const auto & r : results) {
    out += std::to_string(r.individual_id) + "," + std::to_string(r.seed) + "," + format_g17(r.tta_star) + "," +
           format_g17(r.pet_star) + "," + (r.collision ? "1" : "0") + params_row(r.params) + "\n";
  }
  return out;
}

std::vector<SearchResult> parse_search_results_csv(std::string_view text)
{
  const CsvTable t(text, "search_results");
  std::vector<SearchResult> results;
  for (std::size_t r = 0; r < t.size(); ++r) {
    SearchResult s;
    s.individual_id = t.integer<int>(r, "individual_id");
    s.seed = t.integer<std::uint64_t>(r, "seed");
    s.tta_star = t.real(r, "tta_star_s");
    s.pet_star = t.real(r, "pet_star_s");
    s.collision = t.boolean(r, "collision");
    s.params = read_params(t, r);
    try {
      validate(s.params);
    } catch (const ValidationError & err) {
      throw ParseError(err.what(), t.line(r));
    }
    results.push_back(std::move(s));
  }
  return results;
}

std::string optimisation_log_jsonl(
  std::string_view study, std::string_view key, const std::vector<OptimisationRecord> & records)
{
  std::string out;
  for (const auto & r : records) {
    nlohmann::ordered_json j;
    j["study"] = study;
    j["key"] = key;
    j["iter"] = r.iter;
    j["candidate"] = round6(r.candidate);
    j["objective"] = round6(r.objective);
    j["feasible"] = r.feasible;
    j["best_so_far"] = round6(r.best_so_far);
    out += j.dump() + "\n";
  }
  return out;
}

std::string manifest_timestamp()
{
  std::time_t t = 0;
  if (const char * sde = std::getenv("SOURCE_DATE_EPOCH"); sde != nullptr && *sde != '\0') {
    long long v = 0;
    const std::string_view s(sde);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || v < 0) {
      throw ValidationError("SOURCE_DATE_EPOCH must be a non-negative integer");
    }
    t = static_cast<std::time_t>(v);
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_json(const RunManifest & m)
{
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config_path"] = m.config_path;
  j["output_dir"] = m.output_dir;
  j["seed_override"] = m.seed_override ? nlohmann::ordered_json(*m.seed_override) : nlohmann::ordered_json(nullptr);
  j["timestamp"] = m.timestamp;
  j["tool_version"] = m.tool_version;
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string & path, std::string_view content)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw Error("cannot write '" + tmp + "'");
    }
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
      throw Error("write failed for '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

std::string read_file(const std::string & path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw ValidationError("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string plot_metrics_vs_tta_csv(const std::vector<BenchmarkCell> & cells)
{
  std::string out = header_line("plot_metrics_vs_tta");
  out += "model,controller,tta_s,trials,collision_rate,acceptance_rate,sudden_change_rate,mean_pet_s,min_pet_s\n";
  for (const auto & c : cells) {
    const auto & s = c.summary;
    out += std::string(to_string(c.model)) + "," + std::string(to_string(c.controller)) + "," + format_g6(c.tta) + "," +
           std::to_string(s.trials) + "," + format_g6(s.collision_rate) + "," +
           (s.acceptance_defined > 0 ? format_g6(s.acceptance_rate) : std::string()) + "," +
           format_g6(s.sudden_change_rate) + "," + opt6(s.mean_pet) + "," + opt6(s.min_pet) + "\n";
  }
  return out;
}

std::string plot_pet_distribution_csv(const std::vector<BenchmarkCell> & cells)
{
  std::string out = header_line("plot_pet_distribution");
  out += "model,controller,tta_s,trial,individual_id,pet_s,collision\n";
  for (const auto & c : cells) {
    for (const auto & t : c.trials) {
      if (!t.outcome.pet) {
        continue;
      }
      out += std::string(to_string(c.model)) + "," + std::string(to_string(c.controller)) + "," + format_g6(c.tta) +
             "," + std::to_string(t.trial) + "," + std::to_string(t.individual_id) + "," + format_g6(*t.outcome.pet) +
             "," + (t.outcome.collision ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::string plot_trajectories_csv(const std::vector<LabelledTrace> & traces)
{
  std::string out = header_line("plot_trajectories");
  out += "label,t,veh_distance_m,ped_distance_m\n";
  for (const auto & lt : traces) {
    check_field(lt.label);
    for (const auto & s : lt.trace->samples) {
      // Signed distances to the conflict point, negative once it is passed.
      out += lt.label + "," + format_g6(s.t) + "," + format_g6(-s.vehicle.x) + "," + format_g6(-s.pedestrian.y) + "\n";
    }
  }
  return out;
}

std::string plot_pet_vs_tta_csv(const std::vector<SearchResult> & results)
{
  std::string out = header_line("plot_pet_vs_tta");
  out += "individual_id,tta_star_s,pet_star_s,collision\n";
  for (const auto & r : results) {
    out += std::to_string(r.individual_id) + "," + format_g6(r.tta_star) + "," + format_g6(r.pet_star) + "," +
           (r.collision ? "1" : "0") + "\n";
  }
  return out;
}

std::string plot_pet_strips_csv(const std::vector<ConditionPets> & conditions)
{
  std::string out = header_line("plot_pet_strips");
  out += "condition,entry,pet_s\n";
  for (const auto & c : conditions) {
    check_field(c.condition);
    for (std::size_t i = 0; i < c.pets.size(); ++i) {
      if (c.pets[i]) {
        out += c.condition + "," + std::to_string(i) + "," + format_g6(*c.pets[i]) + "\n";
      }
    }
  }
  return out;
}

}  // namespace xwalk
