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

#include "ltwalk/config.hpp"
#include "ltwalk/error.hpp"

using namespace ltw;

namespace {

const char* kBase = R"(schema_version: 1
walk: {preset: biased1d, p: "2/3"}
horizon: 8
)";

std::string parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigParse);
    return e.what();
  }
  FAIL("expected ConfigParse");
  return {};
}

bool mentions(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal config and defaults") {
  const auto c = parse_config(kBase);
  CHECK(c.horizon == 8);
  CHECK(c.replicas == 1);
  CHECK(c.dist.dim() == 1);
  CHECK(c.dist.has_exact());
  CHECK(c.schedule.points(c.horizon).size() == 4);
}

TEST_CASE("full config round trip") {
  const auto c = parse_config(std::string(kBase) + R"(observables:
  - {form: power, alpha: 2}
  - {form: indicator, members: [1, 2]}
  - {form: visited}
  - {form: table, values: [1, 2, 3], tail: last}
  - {form: exp_capped, c_over_lambda: 0.5, p: 2}
alphas: [0, 1.5]
replicas: 12
seed: 99
threads: 2
checkpoints: {first: 2, ratio: 3, extra: [5]}
gamma: {pin: "1/3", horizon: 500, allow_recurrent: true, mc_horizon: 200}
exact: {horizon: 64}
memory_cap_mb: 16
verify:
  toggles: {slln: false}
  variance: {split: true}
  maxlocal: {epsilon: 0.25, m: 2, t_grid: [1, 2, 3], max_violation: 0.1}
  conditions: {mode: eta, eta: 0.25, grid: [2, 4]}
  subsequence: {deltas: [1], count: 10, sequence: inverse}
  truncation: {case: i, eta: 0.3, observable: 4}
)");
  CHECK(c.observables.size() == 5);
  CHECK(c.pending.size() == 1);
  CHECK(c.pending[0].index == 4);
  CHECK(c.alphas == std::vector<double>{0, 1.5});
  CHECK(c.replicas == 12);
  CHECK(c.seed == 99);
  CHECK(c.threads == 2);
  CHECK(c.schedule.points(8) == std::vector<std::int64_t>{2, 5, 6, 8});
  CHECK(c.gamma_pin.value() == doctest::Approx(1.0 / 3.0));
  CHECK(c.gamma_horizon == 500);
  CHECK(c.allow_recurrent);
  CHECK(c.gamma_mc_horizon == 200);
  CHECK(c.exact_horizon == 64);
  CHECK(c.memory_cap_bytes == std::size_t{16} << 20);
  CHECK(!c.verify.slln);
  CHECK(c.verify.variance);
  CHECK(c.variance_split == VarianceSplit::kSplit);
  CHECK(c.maxlocal.m == 2);
  CHECK(c.conditions.mode.kind == ConditionMode::kEta);
  CHECK(c.conditions.grid.size() == 2);
  CHECK(c.subsequence.sequence == "inverse");
  CHECK(c.truncation.which == TruncationCase::kI);
  CHECK(c.truncation.observable.value() == 4);
}

TEST_CASE("errors name the offending field") {
  CHECK(mentions(parse_error(std::string(kBase) + "alphas: [1, -1]\n"), "alphas[1]"));
  CHECK(mentions(parse_error(std::string(kBase) + "colour: red\n"), "unknown key 'colour'"));
  CHECK(mentions(parse_error(std::string(kBase) + "observables:\n  - {form: power, alpha: -2}\n"),
                 "observables[0].alpha"));
  CHECK(mentions(parse_error(std::string(kBase) + "observables:\n  - {form: spline}\n"), "observables[0].form"));
  CHECK(mentions(parse_error(std::string(kBase) + "replicas: 0\n"), "replicas"));
  CHECK(mentions(parse_error(std::string(kBase) + "replicas: many\n"), "replicas"));
  CHECK(mentions(parse_error("schema_version: 2\nwalk: {preset: simple}\nhorizon: 4\n"), "schema_version"));
  CHECK(mentions(parse_error("walk: {preset: simple}\nhorizon: 4\n"), "schema_version"));
  CHECK(mentions(parse_error("schema_version: 1\nwalk: {preset: simple}\n"), "horizon"));
  CHECK(mentions(parse_error("schema_version: 1\nwalk: {preset: biased1d, p: 1.5}\nhorizon: 4\n"), "walk"));
  CHECK(mentions(parse_error("schema_version: 1\nwalk: {preset: warp}\nhorizon: 4\n"), "walk"));
  CHECK(mentions(parse_error("schema_version: 1\nwalk: {preset: custom, dim: 1, atoms: [{site: [1], prob: 0.5}]}\n"
                             "horizon: 4\n"),
                 "MassNotOne"));
  CHECK(mentions(parse_error(std::string(kBase) + "verify: {conditions: {mode: linear}}\n"), "verify.conditions.mode"));
  CHECK(mentions(parse_error("schema_version: 1\nwalk: [\n"), "<yaml>"));
}

TEST_CASE("digest is stable and sensitive") {
  const std::string a = kBase;
  CHECK(config_digest(a) == config_digest(std::string(kBase)));
  CHECK(config_digest(a) != config_digest(a + "seed: 1\n"));
  // FNV-1a 64 of the empty string.
  CHECK(config_digest("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("custom walks") {
  const auto c = parse_config(R"(schema_version: 1
walk:
  preset: custom
  dim: 2
  atoms:
    - {site: [1, 0], prob: "1/3"}
    - {site: [0, 1], prob: "1/3"}
    - {site: [-1, -1], prob: "1/3"}
horizon: 10
)");
  CHECK(c.dist.dim() == 2);
  CHECK(c.dist.size() == 3);
  CHECK(c.dist.is_centered());
}
