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

#ifndef XWALK__RNG_HPP_
#define XWALK__RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace xwalk
{

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Combine a base seed with identifiers into an independent child seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> ids)
{
  std::uint64_t h = mix64(base);
  for (auto id : ids) {
    h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
  }
  return h;
}

/// Reproducible random stream. The engine is mt19937_64, whose output sequence
/// is fixed by the standard; the distributions are implemented here because
/// the standard library ones are not portable across vendors.
class RngStream
{
public:
  static constexpr int kPedestrian = 0;
  static constexpr int kPopulation = 1;
  static constexpr int kController = 2;

  RngStream(std::uint64_t seed, std::uint64_t stream_id)
  : seed_(seed), stream_id_(stream_id), engine_(derive_seed(seed, {stream_id}))
  {
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the Marsaglia polar method.
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Normal restricted to [lo, hi] by rejection.
  double truncated_normal(double mean, double sd, double lo, double hi);

  /// exp(Uniform[log lo, log hi]).
  double log_uniform(double lo, double hi);

  bool bernoulli(double p) { return uniform() < p; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace xwalk

#endif  // XWALK__RNG_HPP_
