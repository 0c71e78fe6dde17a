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


#include "xwalk/config.hpp"

#include "xwalk/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace xwalk
{

namespace
{

struct Key
{
  std::string section;
  std::string name;
  std::string doc;
  std::function<std::string(const ExperimentConfig &)> get;
  std::function<bool(ExperimentConfig &, std::string_view)> set;  // false on a bad value
};

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string show(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool read(std::string_view s, double & out)
{
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

template <class Int>
bool read_int(std::string_view s, Int & out)
{
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

template <class F>
Key real(std::string section, std::string name, std::string doc, F field)
{
  return Key{
    std::move(section), std::move(name), std::move(doc),
    [field](const ExperimentConfig & c) { return show(field(const_cast<ExperimentConfig &>(c))); },
    [field](ExperimentConfig & c, std::string_view v) { return read(v, field(c)); }};
}

template <class F>
Key integer(std::string section, std::string name, std::string doc, F field)
{
  return Key{
    std::move(section), std::move(name), std::move(doc),
    [field](const ExperimentConfig & c) { return std::to_string(field(const_cast<ExperimentConfig &>(c))); },
    [field](ExperimentConfig & c, std::string_view v) { return read_int(v, field(c)); }};
}

const std::vector<Key> & registry()
{
  using C = ExperimentConfig;
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    // scenario
    k.push_back(real("scenario", "vehicle_speed", "m/s, > 0", [](C & c) -> double & { return c.base.vehicle_speed; }));
    k.push_back(real("scenario", "tta", "s, in [6, 18]", [](C & c) -> double & { return c.base.tta; }));
    k.push_back(real("scenario", "road_half_width", "m, >= 1", [](C & c) -> double & { return c.base.road_half_width; }));
    k.push_back(real("scenario", "ped_start_lateral", "m, > road_half_width", [](C & c) -> double & { return c.base.ped_start_lateral; }));
    k.push_back(real("scenario", "vehicle_length", "m, > 0", [](C & c) -> double & { return c.base.vehicle_length; }));
    k.push_back(real("scenario", "vehicle_width", "m", [](C & c) -> double & { return c.base.vehicle_width; }));
    k.push_back(real("scenario", "ped_radius", "m", [](C & c) -> double & { return c.base.ped_radius; }));
    k.push_back(real("scenario", "dt", "s, in (0, 0.1]", [](C & c) -> double & { return c.base.dt; }));
    k.push_back(real("scenario", "max_sim_time", "s", [](C & c) -> double & { return c.base.max_sim_time; }));
    k.push_back(real("scenario", "finish_line", "m past the conflict point", [](C & c) -> double & { return c.base.finish_line; }));
    k.push_back(integer("scenario", "seed", "trial seed for simulate", [](C & c) -> std::uint64_t & { return c.base.seed; }));
    k.push_back(Key{
      "scenario", "pedestrian_model", "scripted | human_like | jaywalker",
      [](const C & c) { return std::string(to_string(c.base.pedestrian_model)); },
      [](C & c, std::string_view v) {
        const auto m = parse_pedestrian_model(v);
        if (!m || *m == PedestrianModel::none) {
          return false;
        }
        c.base.pedestrian_model = *m;
        return true;
      }});
    k.push_back(Key{
      "scenario", "controller", "cruise_brake | foresight_yield | constant_speed",
      [](const C & c) { return std::string(to_string(c.base.controller)); },
      [](C & c, std::string_view v) {
        const auto m = parse_controller_kind(v);
        if (!m) {
          return false;
        }
        c.base.controller = *m;
        return true;
      }});
    // controller
    k.push_back(real("controller", "target_speed", "m/s", [](C & c) -> double & { return c.base.controller_params.target_speed; }));
    k.push_back(real("controller", "braking_distance", "m, in [4, 25]", [](C & c) -> double & { return c.base.controller_params.braking_distance; }));
    k.push_back(real("controller", "max_brake", "m/s^2, in (0, 8]", [](C & c) -> double & { return c.base.controller_params.max_brake; }));
    k.push_back(real("controller", "comfort_accel", "m/s^2", [](C & c) -> double & { return c.base.controller_params.comfort_accel; }));
    k.push_back(real("controller", "comfort_brake", "m/s^2, <= 2.5", [](C & c) -> double & { return c.base.controller_params.comfort_brake; }));
    k.push_back(real("controller", "prediction_horizon", "s", [](C & c) -> double & { return c.base.controller_params.prediction_horizon; }));
    k.push_back(real("controller", "stop_margin", "m", [](C & c) -> double & { return c.base.controller_params.stop_margin; }));
    k.push_back(real("controller", "resume_debounce", "s", [](C & c) -> double & { return c.base.controller_params.resume_debounce; }));
    // pedestrian population
    k.push_back(real("pedestrian", "v_walk_mean", "m/s", [](C & c) -> double & { return c.population.v_walk_mean; }));
    k.push_back(real("pedestrian", "v_walk_sd", "m/s", [](C & c) -> double & { return c.population.v_walk_sd; }));
    k.push_back(real("pedestrian", "v_walk_lo", "m/s", [](C & c) -> double & { return c.population.v_walk_lo; }));
    k.push_back(real("pedestrian", "v_walk_hi", "m/s", [](C & c) -> double & { return c.population.v_walk_hi; }));
    k.push_back(real("pedestrian", "tau_gap_mean", "s", [](C & c) -> double & { return c.population.tau_gap_mean; }));
    k.push_back(real("pedestrian", "tau_gap_sd", "s", [](C & c) -> double & { return c.population.tau_gap_sd; }));
    k.push_back(real("pedestrian", "tau_gap_lo", "s, >= 2", [](C & c) -> double & { return c.population.tau_gap_lo; }));
    k.push_back(real("pedestrian", "tau_gap_hi", "s", [](C & c) -> double & { return c.population.tau_gap_hi; }));
    k.push_back(real("pedestrian", "k_gain_lo", "1/s, log-uniform", [](C & c) -> double & { return c.population.k_gain_lo; }));
    k.push_back(real("pedestrian", "k_gain_hi", "1/s", [](C & c) -> double & { return c.population.k_gain_hi; }));
    k.push_back(real("pedestrian", "threshold_lo", "uniform", [](C & c) -> double & { return c.population.threshold_lo; }));
    k.push_back(real("pedestrian", "threshold_hi", "", [](C & c) -> double & { return c.population.threshold_hi; }));
    k.push_back(real("pedestrian", "sigma_lo", "uniform", [](C & c) -> double & { return c.population.sigma_lo; }));
    k.push_back(real("pedestrian", "sigma_hi", "", [](C & c) -> double & { return c.population.sigma_hi; }));
    k.push_back(real("pedestrian", "weber_lo", "uniform", [](C & c) -> double & { return c.population.weber_lo; }));
    k.push_back(real("pedestrian", "weber_hi", "", [](C & c) -> double & { return c.population.weber_hi; }));
    k.push_back(real("pedestrian", "t_react_lo", "s, uniform", [](C & c) -> double & { return c.population.t_react_lo; }));
    k.push_back(real("pedestrian", "t_react_hi", "s", [](C & c) -> double & { return c.population.t_react_hi; }));
    k.push_back(real("pedestrian", "speedup_lo", "uniform", [](C & c) -> double & { return c.population.speedup_lo; }));
    k.push_back(real("pedestrian", "speedup_hi", "", [](C & c) -> double & { return c.population.speedup_hi; }));
    k.push_back(real("pedestrian", "jaywalker_trigger_tta", "s", [](C & c) -> double & { return c.jaywalker.trigger_tta; }));
    k.push_back(real("pedestrian", "jaywalker_dash_speed", "m/s, <= 4", [](C & c) -> double & { return c.jaywalker.dash_speed; }));
    k.push_back(real("pedestrian", "jaywalker_p_freeze", "per crossing", [](C & c) -> double & { return c.jaywalker.p_freeze; }));
    k.push_back(real("pedestrian", "jaywalker_freeze_duration", "s", [](C & c) -> double & { return c.jaywalker.freeze_duration; }));
    k.push_back(real("pedestrian", "jaywalker_ttc_survival", "s", [](C & c) -> double & { return c.jaywalker.ttc_survival; }));
    k.push_back(real("pedestrian", "jaywalker_relax_time", "s", [](C & c) -> double & { return c.jaywalker.relax_time; }));
    // optimiser
    k.push_back(integer("optimiser", "n_iterations", "evaluations per run", [](C & c) -> int & { return c.optimiser.n_iterations; }));
    k.push_back(integer("optimiser", "n_initial", "quasi-random evaluations, < n_iterations", [](C & c) -> int & { return c.optimiser.n_initial; }));
    k.push_back(real("optimiser", "xi", "EI exploration offset", [](C & c) -> double & { return c.optimiser.xi; }));
    // experiment
    k.push_back(integer("experiment", "seed", "master seed of every study", [](C & c) -> std::uint64_t & { return c.seed; }));
    k.push_back(integer("experiment", "n_individuals", "adversarial search size", [](C & c) -> int & { return c.n_individuals; }));
    k.push_back(integer("experiment", "bench_individuals", "human-like individuals per benchmark cell", [](C & c) -> int & { return c.bench_individuals; }));
    k.push_back(integer("experiment", "bench_repeats", "repeats per benchmark individual", [](C & c) -> int & { return c.bench_repeats; }));
    k.push_back(integer("experiment", "jobs", "worker threads", [](C & c) -> int & { return c.jobs; }));
    return k;
  }();
  return keys;
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text)
{
  std::map<std::string, const Key *> index;
  std::set<std::string> sections;
  for (const auto & k : registry()) {
    index[k.section + "." + k.name] = &k;
    sections.insert(k.section);
  }

  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("unterminated section header", line_no);
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (sections.count(section) == 0) {
        throw ParseError("unknown section [" + section + "]", line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key = value", line_no);
    }
    if (section.empty()) {
      throw ParseError("key outside of any section", line_no);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string full = section + "." + key;
    const auto it = index.find(full);
    if (it == index.end()) {
      throw ParseError("unknown key '" + key + "' in [" + section + "]", line_no);
    }
    if (!seen.insert(full).second) {
      throw ParseError("duplicate key '" + full + "'", line_no);
    }
    if (value.empty() || !it->second->set(cfg, value)) {
      throw ParseError("bad value '" + value + "' for " + full, line_no);
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string & path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw ValidationError("cannot open config file '" + path + "'");
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string render_config(const ExperimentConfig & cfg)
{
  std::ostringstream out;
  std::string section;
  for (const auto & k : registry()) {
    if (k.section != section) {
      if (!section.empty()) {
        out << "\n";
      }
      section = k.section;
      out << "[" << section << "]\n";
    }
    out << k.name << " = " << k.get(cfg);
    if (!k.doc.empty()) {
      out << "  # " << k.doc;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace xwalk
