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

#include "ltwalk/error.hpp"
#include "ltwalk/exact_q.hpp"
#include "ltwalk/return_series.hpp"
#include "oracles.hpp"

using namespace ltw;

namespace {

// E Q_n(j) for j = 1..n+1 by enumerating every path.
std::vector<double> enumerated_EQ(const std::vector<oracle::Step>& steps, int n) {
  std::vector<double> eq(n + 2, 0.0);
  oracle::for_each_path(steps, n, [&](double p, const auto& lt, const auto&) {
    for (const auto& [x, l] : lt) eq[l] += p;
  });
  return eq;
}

}  // namespace

TEST_CASE("E Q_n(j) matches enumeration") {
  struct Case {
    StepDistribution dist;
    std::vector<oracle::Step> steps;
    int n;
  };
  const std::vector<Case> cases{{biased_walk(2.0 / 3.0), oracle::biased(2.0 / 3.0), 12},
                                {simple_walk(2), oracle::simple(2), 7},
                                {simple_walk(3), oracle::simple(3), 5}};
  for (const auto& c : cases) {
    const auto s = make_return_series(c.dist, 64);
    const ExactQTable table(s.f_tau, s.gamma.gamma_n, c.n);
    for (int n = 0; n <= c.n; ++n) {
      const auto eq = enumerated_EQ(c.steps, n);
      for (int j = 1; j <= n + 1; ++j) {
        CHECK(std::abs(exact_EQ(s.f_tau, s.gamma.gamma_n, n, j) - eq[j]) <= 1e-12);
        CHECK(std::abs(table.expected_Q(n, j) - eq[j]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("hand-derived values at n = 2") {
  const auto s = make_return_series(biased_walk(2.0 / 3.0), 16);
  CHECK(exact_EQ(s.f_tau, s.gamma.gamma_n, 2, 1) == doctest::Approx(19.0 / 9.0).epsilon(1e-14));
  CHECK(exact_EQ(s.f_tau, s.gamma.gamma_n, 2, 2) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(exact_EQ(s.f_tau, s.gamma.gamma_n, 2, 3) == 0.0);
}

TEST_CASE("table bookkeeping") {
  const auto s = make_return_series(biased_walk(2.0 / 3.0), 300);
  const ExactQTable t(s.f_tau, s.gamma.gamma_n, 300);
  for (std::size_t n : {0, 1, 10, 100, 300}) {
    CHECK(t.mass_defect(n) < 1e-12);
    CHECK(t.expected_G([](std::int64_t j) { return static_cast<double>(j); }, n) ==
          doctest::Approx(n + 1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(t.expected_Q(301, 1), Error);
}

TEST_CASE("E G_n(power(1)) = n + 1") {
  const auto s = make_return_series(simple_walk(3), 400);
  for (std::size_t n : {1, 17, 400}) {
    CHECK(exact_EG(s.f_tau, s.gamma.gamma_n, Observable::power(1), n) == doctest::Approx(n + 1.0).epsilon(1e-11));
  }
}

TEST_CASE("E G_n / n approaches the limit constant") {
  const auto s = make_return_series(biased_walk(2.0 / 3.0), 4000);
  const double g = 1.0 / 3.0;
  for (const auto& f : {Observable::power(0), Observable::power(2), Observable::indicator({1})}) {
    const double lim = limit_constant(f, g);
    const double eg = exact_EG(s.f_tau, s.gamma.gamma_n, f, 4000) / 4000.0;
    CHECK(eg == doctest::Approx(lim).epsilon(5e-3));
  }
}

TEST_CASE("limit constants match direct summation") {
  const double g = 1.0 / 3.0;
  CHECK(limit_constant(Observable::power(0), g) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(limit_constant(Observable::power(1), g) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(limit_constant(Observable::power(2), g) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(limit_constant(Observable::indicator({1}), g) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  const std::vector<Observable> fs{Observable::power(0.5),
                                   Observable::power(3.7),
                                   Observable::indicator({2, 5}),
                                   Observable::indicator_cofinite({1}),
                                   Observable::table({0.5, 2, 1}, TailRule::kLast),
                                   Observable::exp_capped(0.2, 1.0)};
  for (double gamma : {0.2, 1.0 / 3.0, 0.659462670}) {
    for (const auto& f : fs) {
      CHECK(limit_constant(f, gamma) ==
            doctest::Approx(oracle::limit_by_summation([&](std::int64_t j) { return f(j); }, gamma)).epsilon(1e-10));
    }
  }
  CHECK(limit_constant(Observable::power(2), 1.0) == 1.0);
}

TEST_CASE("limit constant at the critical exponential rate") {
  const double g = 1.0 / 3.0;
  const double lam = lambda_star(g);
  // sum e^{lam j} j^-p (1-g)^{j-1} = zeta(p) / (1 - g).
  CHECK(limit_constant(Observable::exp_capped(lam, 2.5), g) ==
        doctest::Approx(g * g * 1.341487257250917 / (1.0 - g)).epsilon(1e-9));
  for (double p : {1.0, 0.5}) {
    try {
      limit_constant(Observable::exp_capped(lam, p), g);
      FAIL("expected SeriesDivergent");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSeriesDivergent);
    }
  }
  CHECK_THROWS_AS(limit_constant(Observable::exp_capped(1.1 * lam, 5.0), g), Error);
  CHECK_THROWS_AS(limit_constant(Observable::power(1), 0.0), Error);
}

TEST_CASE("gamma self-convolution") {
  const std::vector<double> gn{1.0, 0.5, 0.25};
  const auto c = gamma_self_convolution(gn, 2);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(1.0));
  CHECK(c[2] == doctest::Approx(0.25 + 0.25 + 0.25));
}
