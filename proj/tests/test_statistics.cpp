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

#include <doctest.h>

#include <random>

#include "ltwalk/statistics.hpp"

using namespace ltw;

TEST_CASE("running moments match two-pass formulas") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(3.0, 2.0);
  std::vector<double> xs(1000);
  for (auto& x : xs) x = nd(rng);
  RunningMoments m;
  for (double x : xs) m.add(x);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0.0, sq_about_3 = 0.0;
  for (double x : xs) {
    ss += (x - mean) * (x - mean);
    sq_about_3 += (x - 3.0) * (x - 3.0);
  }
  CHECK(m.count() == 1000);
  CHECK(m.mean() == doctest::Approx(mean).epsilon(1e-13));
  CHECK(m.variance() == doctest::Approx(ss / 999.0).epsilon(1e-12));
  CHECK(m.std_error() == doctest::Approx(std::sqrt(ss / 999.0 / 1000.0)).epsilon(1e-12));
  CHECK(m.mean_square_about(3.0) == doctest::Approx(sq_about_3 / 1000.0).epsilon(1e-12));

  RunningMoments a, b;
  for (std::size_t i = 0; i < xs.size(); ++i) (i < 300 ? a : b).add(xs[i]);
  a.merge(b);
  CHECK(a.count() == 1000);
  CHECK(a.mean() == doctest::Approx(mean).epsilon(1e-13));
  CHECK(a.variance() == doctest::Approx(ss / 999.0).epsilon(1e-12));
  RunningMoments empty;
  empty.merge(a);
  CHECK(empty.variance() == doctest::Approx(a.variance()));
}

TEST_CASE("variance confidence bound") {
  // One degree of freedom: lower = s^2 / chi2_{0.99}(1), chi2_{0.99}(1) = 6.634896601.
  const auto ci = variance_confidence(2.0, 2, 0.99);
  CHECK(ci.lower == doctest::Approx(2.0 / 6.634896601021214).epsilon(1e-9));
  CHECK(ci.upper > 2.0);
  const auto wide = variance_confidence(1.0, 501, 0.99);
  CHECK(wide.lower < 1.0);
  CHECK(wide.lower > 0.8);
}

TEST_CASE("Wilson interval") {
  const auto zero = wilson_interval(0, 10, 0.95);
  CHECK(zero.lower == doctest::Approx(0.0).epsilon(1e-12));
  const double z2 = 1.959963984540054 * 1.959963984540054;
  CHECK(zero.upper == doctest::Approx(z2 / (10.0 + z2)).epsilon(1e-12));
  const auto half = wilson_interval(50, 100, 0.95);
  CHECK(half.contains(0.5));
  CHECK((half.lower + half.upper) / 2.0 == doctest::Approx(0.5));
}

TEST_CASE("chi-square goodness of fit") {
  const std::vector<std::int64_t> even{10, 10};
  const std::vector<double> probs{0.5, 0.5};
  const auto a = chi_square_gof(even, probs);
  CHECK(a.statistic == 0.0);
  CHECK(a.p_value == doctest::Approx(1.0));
  const std::vector<std::int64_t> skew{30, 10};
  const auto b = chi_square_gof(skew, probs);
  CHECK(b.statistic == doctest::Approx(10.0));
  CHECK(b.dof == 1.0);
  CHECK(b.p_value == doctest::Approx(0.0015654022580025).epsilon(1e-8));
}
