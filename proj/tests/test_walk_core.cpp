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

#include <map>
#include <set>

#include "ltwalk/error.hpp"
#include "ltwalk/local_time_state.hpp"
#include "ltwalk/observable.hpp"
#include "ltwalk/statistics.hpp"
#include "ltwalk/step_distribution.hpp"
#include "ltwalk/walk_generator.hpp"

using namespace ltw;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ltw::Error");
  return ErrorCode::kInvalidArgument;
}

Atom atom(Site s, double p) { return Atom{std::move(s), p, std::nullopt}; }

}  // namespace

TEST_CASE("distribution validation rejects malformed laws") {
  CHECK(code_of([] { validate_distribution({atom({1}, 1.2), atom({-1}, -0.2)}, 1); }) ==
        ErrorCode::kNegativeProbability);
  CHECK(code_of([] { validate_distribution({}, 1); }) == ErrorCode::kEmptySupport);
  CHECK(code_of([] { validate_distribution({atom({1}, 0.0)}, 1); }) == ErrorCode::kEmptySupport);
  CHECK(code_of([] { validate_distribution({atom({1, 0}, 0.5), atom({-1}, 0.5)}, 2); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(code_of([] { validate_distribution({atom({1}, 0.5), atom({-1}, 0.4)}, 1); }) == ErrorCode::kMassNotOne);
  CHECK(code_of([] { preset("nonsense", 1, std::nullopt); }) == ErrorCode::kUnknownPreset);
  CHECK(code_of([] { biased_walk(1.0); }) == ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { biased_walk(0.0); }) == ErrorCode::kParameterOutOfRange);
}

TEST_CASE("duplicate sites merge and zero atoms drop") {
  const auto d = validate_distribution({atom({1}, 0.25), atom({1}, 0.25), atom({-1}, 0.5), atom({7}, 0.0)}, 1);
  REQUIRE(d.size() == 2);
  double mass_at_one = 0.0;
  for (const auto& a : d.atoms()) {
    if (a.site == Site{1}) mass_at_one = a.prob;
  }
  CHECK(mass_at_one == doctest::Approx(0.5));
}

TEST_CASE("presets") {
  CHECK(simple_walk(3).size() == 6);
  CHECK(simple_walk(3).is_centered());
  CHECK(simple_walk(3).difference_rank() == 3);
  const auto b = biased_walk(parse_probability("2/3"));
  REQUIRE(b.has_exact());
  CHECK(b.drift()[0] == doctest::Approx(1.0 / 3.0));
  CHECK(!b.is_centered());
  CHECK(as_biased_walk(b).value() == doctest::Approx(2.0 / 3.0));
  CHECK(as_simple_walk(simple_walk(2)).value() == 2);
  CHECK(deterministic_walk().size() == 1);
}

TEST_CASE("probability strings parse exactly") {
  const auto p = parse_probability("2/3");
  REQUIRE(p.exact);
  CHECK(*p.exact == Rational(2, 3));
  CHECK(parse_probability("0.25").exact.value() == Rational(1, 4));
  CHECK(parse_probability("0.0625").exact.value() == Rational(1, 16));
  CHECK(parse_probability("00.5").exact.value() == Rational(1, 2));
  CHECK(parse_probability("1/08").exact.value() == Rational(1, 8));
  CHECK(!parse_probability("1e-3").exact);
  CHECK(parse_probability("1e-3").value == doctest::Approx(1e-3));
}

TEST_CASE("generator streams are reproducible and replica-distinct") {
  const auto d = simple_walk(2);
  WalkGenerator a(d, 7, 0), b(d, 7, 0), c(d, 7, 1);
  const auto sa = generate_steps(a, 500);
  const auto sb = generate_steps(b, 500);
  const auto sc = generate_steps(c, 500);
  CHECK(sa == sb);
  CHECK(sa != sc);
  a.restart();
  CHECK(generate_steps(a, 500) == sa);
}

TEST_CASE("sampler frequencies match the law (cdf and alias paths)") {
  for (int atoms : {3, 12}) {
    std::vector<Atom> list;
    double total = 0.0;
    for (int i = 0; i < atoms; ++i) total += i + 1;
    for (int i = 0; i < atoms; ++i) list.push_back(atom({i - atoms / 2}, (i + 1) / total));
    const auto d = validate_distribution(list, 1);
    StepSampler sampler(d);
    CHECK(sampler.uses_alias() == (atoms > static_cast<int>(StepSampler::kAliasThreshold)));
    Xoshiro256 rng(99);
    std::vector<std::int64_t> counts(d.size(), 0);
    for (int k = 0; k < 200000; ++k) ++counts[sampler(rng)];
    std::vector<double> probs;
    for (const auto& a : d.atoms()) probs.push_back(a.prob);
    const auto gof = chi_square_gof(counts, probs);
    CHECK(gof.p_value > 1e-4);
  }
}

TEST_CASE("local-time state agrees with a naive recount along the path") {
  const auto d = simple_walk(2);
  WalkGenerator gen(d, 11, 3);
  const std::vector<Observable> fs{Observable::power(0), Observable::power(2), Observable::indicator({1, 3}),
                                   Observable::exp_capped(0.3, 1.5)};
  LocalTimeState state(2, fs);
  std::map<Site, std::int64_t> naive{{Site{0, 0}, 1}};
  Site pos{0, 0};
  for (int n = 1; n <= 3000; ++n) {
    const Site& step = gen.next();
    state.ingest_step(step);
    pos[0] += step[0];
    pos[1] += step[1];
    ++naive[pos];
    if (n % 250 != 0) continue;
    std::int64_t lmax = 0;
    std::map<std::int64_t, std::int64_t> q;
    for (const auto& [x, l] : naive) {
      lmax = std::max(lmax, l);
      ++q[l];
    }
    CHECK(state.time() == n);
    CHECK(state.range() == static_cast<std::int64_t>(naive.size()));
    CHECK(state.max_local_time() == lmax);
    const auto h = state.histogram();
    REQUIRE(static_cast<std::int64_t>(h.size()) == lmax + 1);
    std::int64_t weighted = 0, count = 0;
    for (std::size_t j = 1; j < h.size(); ++j) {
      CHECK(h[j] == q[static_cast<std::int64_t>(j)]);
      weighted += static_cast<std::int64_t>(j) * h[j];
      count += h[j];
    }
    CHECK(weighted == n + 1);
    CHECK(count == state.range());
    CHECK(state.functional_L(1.0) == static_cast<double>(n + 1));
    CHECK(state.local_time(pos) == naive[pos]);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      double direct = 0.0;
      for (const auto& [x, l] : naive) direct += fs[i](l);
      CHECK(state.running_G(i) == doctest::Approx(direct).epsilon(1e-12));
      CHECK(state.replay_G(fs[i]) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  CHECK(code_of([&] { state.running_G(Observable::power(5)); }) == ErrorCode::kUnregisteredObservable);
  CHECK(code_of([&] { state.functional_L(-1.0); }) == ErrorCode::kNegativeAlpha);
}

TEST_CASE("fresh state counts the start as a visit") {
  LocalTimeState s(1);
  CHECK(s.range() == 1);
  CHECK(s.max_local_time() == 1);
  CHECK(s.histogram()[1] == 1);
}

TEST_CASE("far jumps migrate to vector keys without losing counts") {
  const std::int64_t far = kPackedLimit + 5;
  const auto d = validate_distribution({atom({far, 0}, 0.5), atom({-far, 0}, 0.5)}, 2);
  WalkGenerator gen(d, 1, 0);
  LocalTimeState s(2);
  std::map<Site, std::int64_t> naive{{Site{0, 0}, 1}};
  Site pos{0, 0};
  for (int n = 1; n <= 200; ++n) {
    const Site& step = gen.next();
    s.ingest_step(step);
    pos[0] += step[0];
    ++naive[pos];
  }
  CHECK(!s.packed_keys());
  CHECK(s.range() == static_cast<std::int64_t>(naive.size()));
  for (const auto& [x, l] : naive) CHECK(s.local_time(x) == l);
}

TEST_CASE("deterministic walk never revisits") {
  WalkGenerator gen(deterministic_walk(3), 0, 0);
  LocalTimeState s(3);
  for (int n = 0; n < 1000; ++n) s.ingest_step(gen.next());
  CHECK(s.range() == 1001);
  CHECK(s.max_local_time() == 1);
}

TEST_CASE("observable values and labels") {
  CHECK(Observable::power(2)(3) == 9.0);
  CHECK(Observable::power(0)(0) == 0.0);
  CHECK(Observable::power(0)(4) == 1.0);
  CHECK(Observable::visited()(5) == 1.0);
  CHECK(Observable::indicator({1})(1) == 1.0);
  CHECK(Observable::indicator({1})(2) == 0.0);
  CHECK(Observable::indicator_cofinite({2})(2) == 0.0);
  CHECK(Observable::indicator_cofinite({2})(3) == 1.0);
  CHECK(Observable::table({1, 4, 9})(4) == 0.0);
  CHECK(Observable::table({1, 4, 9}, TailRule::kLast)(10) == 9.0);
  CHECK(Observable::table({1, 4, 9}, TailRule::kPowerExtrapolation)(6) == doctest::Approx(36.0));
  CHECK(Observable::exp_capped(0.5, 2)(2) == doctest::Approx(std::exp(1.0) / 4.0));
  CHECK(Observable::power(2) == Observable::power(2.0));
  CHECK(code_of([] { Observable::power(-1); }) == ErrorCode::kNegativeAlpha);
}

TEST_CASE("growth classes") {
  CHECK(check_condition_f(Observable::power(3), 0.2) == GrowthClass::kSquareSummable);
  const double lam = -std::log(1.0 - 1.0 / 3.0);
  // e^{c i}/i^p with c = lambda*/4 is square-summable; at c = lambda* only
  // the first moment series can converge, and only when p > 1.
  CHECK(check_condition_f(Observable::exp_capped(lam / 4.0, 0.0), 1.0 / 3.0) == GrowthClass::kSquareSummable);
  CHECK(check_condition_f(Observable::exp_capped(lam, 2.5), 1.0 / 3.0) == GrowthClass::kAbsoluteOnly);
  CHECK(check_condition_f(Observable::exp_capped(2.0 * lam, 2.5), 1.0 / 3.0) == GrowthClass::kUnclassified);
  CHECK(code_of([] { check_condition_f(Observable::power(1), 1.0); }) == ErrorCode::kGammaOutOfRange);
}

TEST_CASE("monotone split reconstructs f") {
  const auto f = Observable::table({1, 3, 2, 5, 0});
  const auto s = split_monotone(f, 5);
  CHECK(f.is_non_decreasing_up_to(5) == false);
  for (int i = 0; i <= 8; ++i) {
    CHECK(s.increasing(i) - s.decreasing(i) == doctest::Approx(f(i)));
    CHECK(s.increasing.is_non_decreasing_up_to(8));
    CHECK(s.decreasing.is_non_decreasing_up_to(8));
  }
}
