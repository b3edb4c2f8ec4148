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

#include "ltwalk/local_time_state.hpp"

#include <algorithm>
#include <cmath>

#include "ltwalk/error.hpp"

namespace ltw {
namespace {

constexpr std::uint64_t kCoordMask = (std::uint64_t{1} << kPackedBits) - 1;

bool fits_packed(std::span<const std::int64_t> coords) noexcept {
  return std::all_of(coords.begin(), coords.end(),
                     [](std::int64_t c) { return c >= -kPackedLimit && c <= kPackedLimit; });
}

}  // namespace

std::uint64_t pack_site(std::span<const std::int64_t> coords) noexcept {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto biased = static_cast<std::uint64_t>(coords[i] + kPackedLimit + 1) & kCoordMask;
    key |= biased << (kPackedBits * i);
  }
  return key;
}

Site unpack_site(std::uint64_t key, int dim) {
  Site site(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    site[i] = static_cast<std::int64_t>((key >> (kPackedBits * i)) & kCoordMask) - (kPackedLimit + 1);
  }
  return site;
}

LocalTimeState::LocalTimeState(int dim, std::vector<Observable> observables)
    : dim_(dim),
      position_(static_cast<std::size_t>(std::max(dim, 1)), 0),
      observables_(std::move(observables)) {
  if (dim < 1) throw Error(ErrorCode::kDimensionMismatch, "dimension must be >= 1");
  if (dim <= 3) {
    counts_.emplace<PackedCounts>();
  } else {
    counts_.emplace<VectorCounts>();
  }
  running_.assign(observables_.size(), 0.0);
  f_cache_.assign(observables_.size(), std::vector<double>{0.0});
  histogram_.assign(1, 0);

  // The walk starts at the origin and S_0 counts as a visit.
  const std::int64_t count = bump_current();
  range_ = 1;
  l_max_ = count;
  histogram_.push_back(1);
  for (std::size_t k = 0; k < observables_.size(); ++k) running_[k] = cached_f(k, 1);
}

std::int64_t LocalTimeState::bump_current() {
  if (auto* packed = std::get_if<PackedCounts>(&counts_)) {
    if (fits_packed(position_)) return ++(*packed)[pack_site(position_)];
    migrate_to_vector_keys();
  }
  return ++std::get<VectorCounts>(counts_)[position_];
}

void LocalTimeState::migrate_to_vector_keys() {
  VectorCounts wide;
  const auto& packed = std::get<PackedCounts>(counts_);
  wide.reserve(packed.size());
  for (const auto& [key, count] : packed) wide.emplace(unpack_site(key, dim_), count);
  counts_ = std::move(wide);
}

double LocalTimeState::cached_f(std::size_t id, std::int64_t i) {
  auto& cache = f_cache_[id];
  while (static_cast<std::int64_t>(cache.size()) <= i) {
    cache.push_back(observables_[id](static_cast<std::int64_t>(cache.size())));
  }
  return cache[static_cast<std::size_t>(i)];
}

void LocalTimeState::ingest_step(std::span<const std::int64_t> increment) {
  if (static_cast<int>(increment.size()) != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "increment dimension does not match state");
  }
  for (int i = 0; i < dim_; ++i) position_[i] += increment[i];
  ++n_;

  const std::int64_t count = bump_current();
  const std::int64_t previous = count - 1;
  if (previous >= 1) {
    --histogram_[static_cast<std::size_t>(previous)];
  } else {
    ++range_;
  }
  if (count >= static_cast<std::int64_t>(histogram_.size())) histogram_.resize(static_cast<std::size_t>(count) + 1, 0);
  ++histogram_[static_cast<std::size_t>(count)];
  l_max_ = std::max(l_max_, count);

  for (std::size_t k = 0; k < observables_.size(); ++k) {
    running_[k] += cached_f(k, count) - cached_f(k, previous);
  }
}

std::int64_t LocalTimeState::local_time(std::span<const std::int64_t> site) const {
  if (static_cast<int>(site.size()) != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "site dimension does not match state");
  }
  if (const auto* packed = std::get_if<PackedCounts>(&counts_)) {
    if (!fits_packed(site)) return 0;
    const auto it = packed->find(pack_site(site));
    return it == packed->end() ? 0 : it->second;
  }
  const auto& wide = std::get<VectorCounts>(counts_);
  const auto it = wide.find(Site(site.begin(), site.end()));
  return it == wide.end() ? 0 : it->second;
}

double LocalTimeState::running_G(std::size_t id) const {
  if (id >= running_.size()) {
    throw Error(ErrorCode::kUnregisteredObservable, "observable id " + std::to_string(id) + " not registered");
  }
  return running_[id];
}

double LocalTimeState::running_G(const Observable& f) const {
  const auto it = std::find(observables_.begin(), observables_.end(), f);
  if (it == observables_.end()) {
    throw Error(ErrorCode::kUnregisteredObservable, f.label() + " was not registered at state creation");
  }
  return running_[static_cast<std::size_t>(it - observables_.begin())];
}

double LocalTimeState::replay_G(const Observable& f) const {
  double total = 0.0;
  for (std::size_t j = 1; j < histogram_.size(); ++j) {
    if (histogram_[j] != 0) total += f(static_cast<std::int64_t>(j)) * static_cast<double>(histogram_[j]);
  }
  return total;
}

double LocalTimeState::functional_L(double alpha) const {
  if (alpha < 0.0 || std::isnan(alpha)) throw Error(ErrorCode::kNegativeAlpha, "alpha must be >= 0");
  if (alpha == 0.0 || alpha == 1.0) {
    // Integer sums: sum_j Q_n(j) and sum_j j Q_n(j).
    std::int64_t total = 0;
    for (std::size_t j = 1; j < histogram_.size(); ++j) {
      total += (alpha == 0.0 ? 1 : static_cast<std::int64_t>(j)) * histogram_[j];
    }
    return static_cast<double>(total);
  }
  return replay_G(Observable::power(alpha));
}

Checkpoint LocalTimeState::checkpoint(std::span<const double> alphas, bool with_histogram) const {
  Checkpoint cp;
  cp.n = n_;
  cp.range = range_;
  cp.l_max = l_max_;
  cp.g = running_;
  cp.l.reserve(alphas.size());
  for (double a : alphas) cp.l.push_back(functional_L(a));
  if (with_histogram) cp.histogram.assign(histogram_.begin(), histogram_.end());
  return cp;
}

LocalTimeState replay_path(int dim, std::span<const Site> increments, std::vector<Observable> observables) {
  LocalTimeState state(dim, std::move(observables));
  for (const auto& step : increments) state.ingest_step(step);
  return state;
}

}  // namespace ltw
