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

#ifndef LTWALK_LOCAL_TIME_STATE_HPP
#define LTWALK_LOCAL_TIME_STATE_HPP

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "ltwalk/observable.hpp"
#include "ltwalk/step_distribution.hpp"

namespace ltw {

// Snapshot of a LocalTimeState at time n.
struct Checkpoint {
  std::int64_t n = 0;
  std::int64_t range = 0;
  std::int64_t l_max = 0;
  std::vector<double> g;  // running G_n(f), one per registered observable
  std::vector<double> l;  // L_n(alpha), one per requested alpha
  std::vector<std::int64_t> histogram;  // optional; [j] = Q_n(j)
};

// Sites with |coordinate| <= kPackedLimit pack into one 64-bit key for
// d <= 3 (21 bits per coordinate).
inline constexpr int kPackedBits = 21;
inline constexpr std::int64_t kPackedLimit = (std::int64_t{1} << (kPackedBits - 1)) - 1;

std::uint64_t pack_site(std::span<const std::int64_t> coords) noexcept;
Site unpack_site(std::uint64_t key, int dim);

// Streaming local-time field of one trajectory started at the origin.
//
// Invariants after every ingest_step():
//   sum_j j Q_n(j) = n + 1,  sum_j Q_n(j) = range,  l_max = max{j : Q_n(j) > 0}.
// S_0 = 0 counts as a visit, so the fresh state has l(0, 0) = 1, Q_0(1) = 1.
class LocalTimeState {
 public:
  explicit LocalTimeState(int dim, std::vector<Observable> observables = {});

  void ingest_step(std::span<const std::int64_t> increment);

  std::int64_t time() const noexcept { return n_; }
  std::int64_t range() const noexcept { return range_; }
  std::int64_t max_local_time() const noexcept { return l_max_; }
  int dim() const noexcept { return dim_; }
  std::span<const std::int64_t> position() const noexcept { return position_; }
  // Q_n(j) for j = 0..l_max; slot 0 is always zero.
  std::span<const std::int64_t> histogram() const noexcept { return histogram_; }
  std::int64_t local_time(std::span<const std::int64_t> site) const;
  bool packed_keys() const noexcept { return std::holds_alternative<PackedCounts>(counts_); }

  std::span<const Observable> observables() const noexcept { return observables_; }
  // Running G_n(f) for the id-th registered observable.
  double running_G(std::size_t id) const;
  // Running G_n(f) of a registered observable; UnregisteredObservable
  // otherwise.
  double running_G(const Observable& f) const;
  // sum_j f(j) Q_n(j) recomputed from the histogram.
  double replay_G(const Observable& f) const;
  // L_n(alpha) = sum_j j^alpha Q_n(j); NegativeAlpha for alpha < 0.
  double functional_L(double alpha) const;

  Checkpoint checkpoint(std::span<const double> alphas, bool with_histogram = false) const;

 private:
  using PackedCounts = absl::flat_hash_map<std::uint64_t, std::int64_t>;
  using VectorCounts = absl::flat_hash_map<Site, std::int64_t>;

  std::int64_t bump_current();
  void migrate_to_vector_keys();
  double cached_f(std::size_t id, std::int64_t i);

  int dim_;
  std::int64_t n_ = 0;
  std::int64_t range_ = 0;
  std::int64_t l_max_ = 0;
  Site position_;
  std::variant<PackedCounts, VectorCounts> counts_;
  std::vector<std::int64_t> histogram_;
  std::vector<Observable> observables_;
  std::vector<double> running_;
  std::vector<std::vector<double>> f_cache_;
};

// Feeds a whole increment sequence into a fresh state.
LocalTimeState replay_path(int dim, std::span<const Site> increments, std::vector<Observable> observables = {});

}  // namespace ltw

#endif  // LTWALK_LOCAL_TIME_STATE_HPP
