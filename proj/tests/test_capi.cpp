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

// Exercises the shared library through the C header only.
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ltwalk/ltwalk.h"

TEST_CASE("C API: distributions and error reporting") {
  ltw_dist* d = nullptr;
  REQUIRE(ltw_dist_biased(2.0 / 3.0, &d) == LTW_OK);
  CHECK(ltw_dist_dim(d) == 1);
  ltw_dist_free(d);

  ltw_dist* bad = nullptr;
  const int64_t sites[] = {1, -1};
  const double probs[] = {1.2, -0.2};
  CHECK(ltw_dist_custom(1, 2, sites, probs, &bad) == LTW_E_NEGATIVE_PROBABILITY);
  CHECK(bad == nullptr);
  CHECK(std::string(ltw_last_error()).find("NegativeProbability") != std::string::npos);
  const double short_probs[] = {0.5, 0.4};
  CHECK(ltw_dist_custom(1, 2, sites, short_probs, &bad) == LTW_E_MASS_NOT_ONE);
  CHECK(ltw_dist_biased(1.0, &bad) == LTW_E_PARAMETER_OUT_OF_RANGE);
  CHECK(ltw_dist_simple(2, nullptr) == LTW_E_INVALID_ARGUMENT);
  CHECK(std::string(ltw_status_name(LTW_E_MEMORY_CAP_EXCEEDED)) == "MemoryCapExceeded");
  CHECK(std::string(ltw_status_name(LTW_VERIFICATION_FAILED)) == "VerificationFailed");
  CHECK(std::string(ltw_version()) == "0.1.0");
}

TEST_CASE("C API: exit code mapping") {
  CHECK(ltw_exit_code(LTW_OK) == 0);
  CHECK(ltw_exit_code(LTW_VERIFICATION_FAILED) == 1);
  CHECK(ltw_exit_code(LTW_E_CONFIG_PARSE) == 2);
  CHECK(ltw_exit_code(LTW_E_INTERNAL) == 2);
  CHECK(ltw_exit_code(LTW_E_MEMORY_CAP_EXCEEDED) == 3);
}

TEST_CASE("C API: walk invariants") {
  ltw_dist* d = nullptr;
  REQUIRE(ltw_dist_simple(3, &d) == LTW_OK);
  ltw_observable* f0 = nullptr;
  ltw_observable* f2 = nullptr;
  REQUIRE(ltw_observable_power(0.0, &f0) == LTW_OK);
  REQUIRE(ltw_observable_power(2.0, &f2) == LTW_OK);
  const ltw_observable* fs[] = {f0, f2};
  ltw_walk* w = nullptr;
  REQUIRE(ltw_walk_create(d, 2026, 0, fs, 2, &w) == LTW_OK);
  REQUIRE(ltw_walk_advance(w, 5000) == LTW_OK);
  ltw_walk_stats st;
  REQUIRE(ltw_walk_stats_get(w, &st) == LTW_OK);
  CHECK(st.n == 5000);
  double l1 = 0.0, l0 = 0.0, l2 = 0.0, g0 = 0.0, g2 = 0.0;
  REQUIRE(ltw_walk_L(w, 1.0, &l1) == LTW_OK);
  CHECK(l1 == 5001.0);
  REQUIRE(ltw_walk_L(w, 0.0, &l0) == LTW_OK);
  CHECK(l0 == static_cast<double>(st.range));
  REQUIRE(ltw_walk_G(w, 0, &g0) == LTW_OK);
  CHECK(g0 == l0);
  REQUIRE(ltw_walk_L(w, 2.0, &l2) == LTW_OK);
  REQUIRE(ltw_walk_G(w, 1, &g2) == LTW_OK);
  CHECK(g2 == doctest::Approx(l2).epsilon(1e-12));
  CHECK(ltw_walk_G(w, 7, &g2) != LTW_OK);
  CHECK(ltw_walk_L(w, -1.0, &l2) == LTW_E_NEGATIVE_ALPHA);

  size_t len = 0;
  REQUIRE(ltw_walk_histogram(w, nullptr, 0, &len) == LTW_OK);
  CHECK(len == static_cast<size_t>(st.l_max + 1));
  std::vector<int64_t> h(len);
  REQUIRE(ltw_walk_histogram(w, h.data(), h.size(), &len) == LTW_OK);
  int64_t weighted = 0, count = 0;
  for (size_t j = 1; j < len; ++j) {
    weighted += static_cast<int64_t>(j) * h[j];
    count += h[j];
  }
  CHECK(weighted == st.n + 1);
  CHECK(count == st.range);

  ltw_walk* twin = nullptr;
  REQUIRE(ltw_walk_create(d, 2026, 0, fs, 2, &twin) == LTW_OK);
  REQUIRE(ltw_walk_advance(twin, 5000) == LTW_OK);
  ltw_walk_stats st2;
  ltw_walk_stats_get(twin, &st2);
  CHECK(st2.range == st.range);
  CHECK(st2.l_max == st.l_max);

  ltw_walk_free(twin);
  ltw_walk_free(w);
  ltw_observable_free(f0);
  ltw_observable_free(f2);
  ltw_dist_free(d);
}

TEST_CASE("C API: series, exact expectations and bounds") {
  ltw_dist* d = nullptr;
  REQUIRE(ltw_dist_biased(2.0 / 3.0, &d) == LTW_OK);
  ltw_series* s = nullptr;
  REQUIRE(ltw_series_create(d, 200, 0, &s) == LTW_OK);
  CHECK(ltw_series_horizon(s) == 200);
  ltw_gamma_info g;
  REQUIRE(ltw_series_gamma(s, &g) == LTW_OK);
  CHECK(std::abs(g.estimate - 1.0 / 3.0) < 1e-6);
  CHECK(g.flag == 0);
  double u2 = 0.0;
  REQUIRE(ltw_series_u(s, 2, &u2) == LTW_OK);
  CHECK(u2 == doctest::Approx(4.0 / 9.0));
  CHECK(ltw_series_u(s, 201, &u2) == LTW_E_HORIZON_EXCEEDED);

  double eq = 0.0;
  REQUIRE(ltw_exact_EQ(s, 2, 1, &eq) == LTW_OK);
  CHECK(eq == doctest::Approx(19.0 / 9.0).epsilon(1e-14));

  ltw_observable* f1 = nullptr;
  REQUIRE(ltw_observable_power(1.0, &f1) == LTW_OK);
  double eg = 0.0;
  REQUIRE(ltw_exact_EG(s, f1, 100, &eg) == LTW_OK);
  CHECK(eg == doctest::Approx(101.0).epsilon(1e-12));
  ltw_observable* f2 = nullptr;
  REQUIRE(ltw_observable_power(2.0, &f2) == LTW_OK);
  double lim = 0.0;
  REQUIRE(ltw_limit_constant(f2, 1.0 / 3.0, 1e-12, &lim) == LTW_OK);
  CHECK(lim == doctest::Approx(5.0).epsilon(1e-12));

  ltw_observable* e = nullptr;
  double lam = 0.0;
  REQUIRE(ltw_lambda_star(1.0 / 3.0, &lam) == LTW_OK);
  REQUIRE(ltw_observable_exp_capped(lam, 1.0, &e) == LTW_OK);
  CHECK(ltw_limit_constant(e, 1.0 / 3.0, 1e-12, &lim) == LTW_E_SERIES_DIVERGENT);

  double b = 0.0;
  REQUIRE(ltw_maxlocal_tail_bound(1000, 30, 1.0 / 3.0, &b) == LTW_OK);
  CHECK(b == doctest::Approx(1000.0 * std::pow(2.0 / 3.0, 29)));
  CHECK(ltw_maxlocal_proposition_bound(10.0, 0.5, 3, 1.0 / 3.0, &b) == LTW_E_ITERATED_LOG_UNDEFINED);

  ltw_observable_free(e);
  ltw_observable_free(f1);
  ltw_observable_free(f2);
  ltw_series_free(s);
  ltw_dist_free(d);
}

TEST_CASE("C API: commands report config errors") {
  ltw_run_options o;
  ltw_run_options_init(&o);
  CHECK(ltw_cmd_simulate("/nonexistent/config.yaml", &o) == LTW_E_CONFIG_PARSE);
  CHECK(ltw_cmd_verify("/nonexistent/config.yaml", "bogus", &o) == LTW_E_INVALID_ARGUMENT);
}
