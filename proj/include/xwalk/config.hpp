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


#ifndef XWALK__CONFIG_HPP_
#define XWALK__CONFIG_HPP_

#include "xwalk/experiments.hpp"

#include <string>
#include <string_view>

namespace xwalk
{

/// Parse an INI-style document:
///
///     # comment
///     [scenario]
///     tta = 12
///
/// Sections: scenario, controller, pedestrian, optimiser, experiment. Keys
/// not listed by render_config are rejected. Missing keys keep defaults.
/// Throws ParseError (with line) on syntax, unknown names or bad values and
/// ValidationError when the result breaks an invariant.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config_file(const std::string & path);

/// Complete effective configuration in the same format; parse_config_text
/// reads it back unchanged.
std::string render_config(const ExperimentConfig & cfg);

}  // namespace xwalk

#endif  // XWALK__CONFIG_HPP_
