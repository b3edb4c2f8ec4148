// Copyright 2026 The ltwalk Authors
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

#ifndef LTWALK_WALK_GENERATOR_HPP
#define LTWALK_WALK_GENERATOR_HPP

#include <cstdint>
#include <vector>

#include "ltwalk/rng.hpp"
#include "ltwalk/step_distribution.hpp"

namespace ltw {

// Draws atom indices from a StepDistribution. Supports larger than
// kAliasThreshold use Vose's alias table (O(1) per draw); smaller ones use a
// cumulative scan. Both consume exactly one uniform01() per draw.
class StepSampler {
 public:
  static constexpr std::size_t kAliasThreshold = 8;

  explicit StepSampler(const StepDistribution& dist);

  std::size_t operator()(Xoshiro256& rng) const noexcept {
    const double u = rng.uniform01();
    if (alias_.empty()) {
      for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) return i;
      }
      return cumulative_.size() - 1;
    }
    const double scaled = u * static_cast<double>(alias_.size());
    std::size_t column = static_cast<std::size_t>(scaled);
    if (column >= alias_.size()) column = alias_.size() - 1;
    return (scaled - static_cast<double>(column)) < threshold_[column] ? column : alias_[column];
  }

  bool uses_alias() const noexcept { return !alias_.empty(); }

 private:
  std::vector<double> cumulative_;
  std::vector<double> threshold_;
  std::vector<std::size_t> alias_;
};

// Seeded, restartable source of increments X_1, X_2, ... for one replica.
// The same (dist, seed, replica_index) always yields the same stream.
class WalkGenerator {
 public:
  WalkGenerator(StepDistribution dist, std::uint64_t seed, std::uint64_t replica_index);

  // Index into dist().atoms() of the next increment.
  std::size_t next_index() noexcept { return sampler_(rng_); }
  const Site& next() noexcept { return dist_.atoms()[next_index()].site; }

  const StepDistribution& dist() const noexcept { return dist_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t replica_index() const noexcept { return replica_; }

  // Rewinds to the first increment.
  void restart() noexcept { rng_ = replica_stream(seed_, replica_); }

 private:
  StepDistribution dist_;
  StepSampler sampler_;
  std::uint64_t seed_;
  std::uint64_t replica_;
  Xoshiro256 rng_;
};

// Materializes the next n increments.
std::vector<Site> generate_steps(WalkGenerator& gen, std::uint64_t n);

}  // namespace ltw

#endif  // LTWALK_WALK_GENERATOR_HPP
