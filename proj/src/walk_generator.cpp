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

#include "ltwalk/walk_generator.hpp"

namespace ltw {

StepSampler::StepSampler(const StepDistribution& dist) {
  const auto atoms = dist.atoms();
  const std::size_t k = atoms.size();
  if (k <= kAliasThreshold) {
    double acc = 0.0;
    for (const auto& a : atoms) {
      acc += a.prob;
      cumulative_.push_back(acc);
    }
    return;
  }

  // Vose's alias method.
  threshold_.assign(k, 0.0);
  alias_.assign(k, 0);
  std::vector<double> scaled(k);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  for (std::size_t i = 0; i < k; ++i) {
    scaled[i] = atoms[i].prob * static_cast<double>(k);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t i : large) {
    threshold_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::size_t i : small) {
    threshold_[i] = 1.0;
    alias_[i] = i;
  }
}

WalkGenerator::WalkGenerator(StepDistribution dist, std::uint64_t seed, std::uint64_t replica_index)
    : dist_(std::move(dist)),
      sampler_(dist_),
      seed_(seed),
      replica_(replica_index),
      rng_(replica_stream(seed, replica_index)) {}

std::vector<Site> generate_steps(WalkGenerator& gen, std::uint64_t n) {
  std::vector<Site> steps;
  steps.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) steps.push_back(gen.next());
  return steps;
}

}  // namespace ltw
