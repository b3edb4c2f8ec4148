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

#include "ltwalk/statistics.hpp"

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "ltwalk/error.hpp"

namespace ltw {

void RunningMoments::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

double RunningMoments::variance() const noexcept {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningMoments::std_error() const noexcept {
  return count_ < 1 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

double RunningMoments::mean_square_about(double target) const noexcept {
  if (count_ == 0) return 0.0;
  const double bias = mean_ - target;
  return m2_ / static_cast<double>(count_) + bias * bias;
}

Interval variance_confidence(double sample_variance, std::int64_t count, double level) {
  if (count < 2) throw Error(ErrorCode::kInvalidArgument, "variance interval needs at least two samples");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::kInvalidArgument, "level must lie in (0, 1)");
  const double dof = static_cast<double>(count - 1);
  const boost::math::chi_squared dist(dof);
  const double ss = dof * sample_variance;
  return {ss / boost::math::quantile(dist, level), ss / boost::math::quantile(dist, 1.0 - level)};
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double level) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw Error(ErrorCode::kInvalidArgument, "wilson interval needs 0 <= successes <= trials, trials >= 1");
  }
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> expected_probs) {
  if (observed.size() != expected_probs.size() || observed.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "chi-square needs matching cell counts (at least two)");
  }
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * expected_probs[i];
    const double d = static_cast<double>(observed[i]) - e;
    r.statistic += d * d / e;
  }
  r.dof = static_cast<double>(observed.size() - 1);
  r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  return r;
}

}  // namespace ltw
