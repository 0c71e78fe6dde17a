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

#include "xwalk/rng.hpp"

#include <cmath>

namespace xwalk
{

double RngStream::normal()
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double RngStream::truncated_normal(double mean, double sd, double lo, double hi)
{
  if (sd <= 0.0) {
    return std::fmin(std::fmax(mean, lo), hi);
  }
  for (int i = 0; i < 10000; ++i) {
    const double x = normal(mean, sd);
    if (x >= lo && x <= hi) {
      return x;
    }
  }
  // Acceptance region far in a tail; fall back to the nearest bound.
  return std::fmin(std::fmax(mean, lo), hi);
}

double RngStream::log_uniform(double lo, double hi)
{
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

}  // namespace xwalk
