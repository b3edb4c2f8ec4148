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

#ifndef LTWALK_STATISTICS_HPP
#define LTWALK_STATISTICS_HPP

#include <cstdint>
#include <span>

namespace ltw {

// Streaming mean and variance (Welford), mergeable with the pairwise rule of
// Chan, Golub and LeVeque.
class RunningMoments {
 public:
  void add(double x);
  void merge(const RunningMoments& other);

  std::int64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  // Unbiased sample variance; 0 for fewer than two samples.
  double variance() const noexcept;
  double std_error() const noexcept;
  // Mean of (x - target)^2.
  double mean_square_about(double target) const noexcept;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

// One-sided chi-square bounds for a normal-theory variance: lower is the
// level-confidence lower bound, upper the level-confidence upper bound.
Interval variance_confidence(double sample_variance, std::int64_t count, double level = 0.99);

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double level = 0.95);

// Pearson statistic and its upper-tail p-value against expected masses.
struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> expected_probs);

}  // namespace ltw

#endif  // LTWALK_STATISTICS_HPP
