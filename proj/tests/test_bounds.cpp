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

#include "ltwalk/bounds.hpp"
#include "ltwalk/error.hpp"
#include "ltwalk/return_series.hpp"
#include "oracles.hpp"

using namespace ltw;

namespace {

double enumerated_variance(const std::vector<oracle::Step>& steps, int n, const Observable& f) {
  double m1 = 0.0, m2 = 0.0;
  oracle::for_each_path(steps, n, [&](double p, const auto& lt, const auto&) {
    double g = 0.0;
    for (const auto& [x, l] : lt) g += f(l);
    m1 += p * g;
    m2 += p * g * g;
  });
  return m2 - m1 * m1;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ltw::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("variance bound dominates the exact variance") {
  const auto s = make_return_series(biased_walk(2.0 / 3.0), 64);
  const double g = s.gamma.gamma_estimate;
  const auto steps = oracle::biased(2.0 / 3.0);
  for (const auto& f : {Observable::visited(), Observable::power(2), Observable::power(0.5)}) {
    for (int n : {1, 2, 5, 10, 12}) {
      const double exact = enumerated_variance(steps, n, f);
      const double bound = variance_bound(f, n, s, g);
      CHECK(exact <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("variance of the range at n = 2") {
  const auto steps = oracle::biased(2.0 / 3.0);
  CHECK(enumerated_variance(steps, 2, Observable::visited()) == doctest::Approx(20.0 / 81.0).epsilon(1e-14));
  const auto s = make_return_series(biased_walk(2.0 / 3.0), 16);
  CHECK(variance_bound(Observable::visited(), 2, s, 1.0 / 3.0) >= 20.0 / 81.0);
}

TEST_CASE("variance bound on a 3d walk") {
  const auto s = make_return_series(simple_walk(3), 64);
  const auto steps = oracle::simple(3);
  for (int n : {2, 4, 6}) {
    CHECK(enumerated_variance(steps, n, Observable::visited()) <=
          variance_bound(Observable::visited(), n, s, s.gamma.gamma_estimate));
  }
}

TEST_CASE("non-monotone observables need the split") {
  const auto s = make_return_series(biased_walk(2.0 / 3.0), 64);
  const auto f = Observable::indicator({1});
  CHECK(code_of([&] { variance_bound(f, 8, s, 1.0 / 3.0); }) == ErrorCode::kNotMonotone);
  const double b = variance_bound(f, 8, s, 1.0 / 3.0, VarianceSplit::kSplit);
  CHECK(enumerated_variance(oracle::biased(2.0 / 3.0), 8, f) <= b);
}

TEST_CASE("maximal local time tail bound") {
  CHECK(maxlocal_tail_bound(1000, 1, 1.0 / 3.0) == 1.0);
  CHECK(maxlocal_tail_bound(1000, 30, 1.0 / 3.0) == doctest::Approx(1000.0 * std::pow(2.0 / 3.0, 29)));
  CHECK(maxlocal_tail_bound(10, 2, 1.0) == 0.0);
  CHECK_THROWS_AS(maxlocal_tail_bound(10, 2, 0.0), Error);
}

TEST_CASE("iterated logarithms") {
  CHECK(iterated_log(std::exp(std::exp(2.0)), 2) == doctest::Approx(2.0));
  CHECK(iterated_log(5.0, 0) == 5.0);
  CHECK(code_of([] { iterated_log(2.0, 3); }) == ErrorCode::kIteratedLogUndefined);
}

TEST_CASE("proposition bound") {
  const double n = 1e5, g = 1.0 / 3.0, lam = std::log(1.5);
  const double l1 = std::log(n), l2 = std::log(l1);
  CHECK(maxlocal_proposition_bound(n, 0.5, 1, g) == doctest::Approx(1.0 + (l1 + 1.5 * l2) / lam));
  CHECK(maxlocal_proposition_bound(n, 0.5, 0, g) == doctest::Approx(1.0 + 1.5 * l1 / lam));
  CHECK(code_of([] { maxlocal_proposition_bound(10.0, 0.5, 2, 1.0 / 3.0); }) ==
        ErrorCode::kIteratedLogUndefined);
}

TEST_CASE("condition checks discriminate growth of S(n)") {
  const auto grid = std::vector<std::int64_t>{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2000};
  const auto biased = compute_u_series(biased_walk(2.0 / 3.0), 2000);
  const auto s2 = compute_u_series(simple_walk(2), 2000);
  ConditionMode log_mode{ConditionMode::kLog, 0.5};
  ConditionMode eta_mode{ConditionMode::kEta, 0.5};
  const auto a = condition_check(biased, log_mode, grid);
  CHECK(a.verdict == Verdict::kHolds);
  CHECK(a.name == "condition-8");
  CHECK(a.detail.rfind("Holds-on-grid", 0) == 0);
  const auto b = condition_check(s2, log_mode, grid);
  CHECK(b.verdict == Verdict::kFails);
  CHECK(b.detail.rfind("Fails-on-grid", 0) == 0);
  CHECK(condition_check(biased, eta_mode, grid).name == "condition-7");
  CHECK(condition_check(s2, eta_mode, grid).verdict == Verdict::kFails);
  const auto s3 = compute_u_series(simple_walk(3), 2000);
  CHECK(condition_check(s3, eta_mode, grid).verdict == Verdict::kHolds);
}

TEST_CASE("condition partial sums on small grids") {
  const auto u = compute_u_series(biased_walk(2.0 / 3.0), 8);
  const std::vector<std::int64_t> grid{1, 2, 4, 8};
  const auto c = condition_check(u, ConditionMode{ConditionMode::kLog, 0.5}, grid);
  REQUIRE(c.evidence.size() >= 2);
  CHECK(c.evidence[0].x == 1.0);
  CHECK(c.evidence[0].value == 0.0);
  CHECK(c.evidence[1].value == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
  const auto d = compute_u_series(deterministic_walk(), 64);
  const std::vector<std::int64_t> dgrid{2, 8, 64};
  CHECK(condition_check(d, ConditionMode{ConditionMode::kLog, 0.5}, dgrid).verdict == Verdict::kHolds);
  CHECK(code_of([&] { condition_check(d, ConditionMode{ConditionMode::kLog, 0.5}, std::vector<std::int64_t>{2, 65}); }) ==
        ErrorCode::kHorizonExceeded);
}

TEST_CASE("truncation thresholds") {
  const auto i = truncation_thresholds(1e5, 1.0 / 3.0, TruncationCase::kI);
  CHECK(!i.has_cut2);
  CHECK(i.cut1 > 0.0);
  const auto ii = truncation_thresholds(1e5, 1.0 / 3.0, TruncationCase::kII);
  CHECK(ii.has_cut2);
  CHECK(ii.cut2 > ii.cut1);
  CHECK(code_of([] { truncation_thresholds(10.0, 1.0 / 3.0, TruncationCase::kII); }) ==
        ErrorCode::kIteratedLogUndefined);
}

TEST_CASE("certificate replay") {
  BoundCertificate c;
  c.evidence.push_back({1, 1, 2, true, ""});
  CHECK(c.replay() == Verdict::kHolds);
  c.evidence.push_back({2, 3, 2, false, ""});
  CHECK(c.replay() == Verdict::kFails);
}
