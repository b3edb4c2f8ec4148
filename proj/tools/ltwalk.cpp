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

// Command-line front end. Talks to the library only through ltwalk.h.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "ltwalk/ltwalk.h"

int main(int argc, char** argv) {
  CLI::App app{"Local times of lattice random walks: simulation, exact expectations and bound checks"};
  app.set_version_flag("--version", std::string(ltw_version()));
  app.require_subcommand(1);
  app.fallthrough();

  ltw_run_options options;
  ltw_run_options_init(&options);
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t mem_cap = 0;
  std::string out_dir = "ltwalk_out";
  bool quiet = false;
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--threads", threads, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
  app.add_option("--mem-cap", mem_cap, "Memory cap in MiB for exact computations")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  app.add_flag("-q,--quiet", quiet, "Suppress progress lines");

  std::string config;
  std::string suite = "all";
  auto* simulate = app.add_subcommand("simulate", "Simulate replicas and write checkpoint CSV");
  auto* exact = app.add_subcommand("exact", "Return series, exact E Q_n(j) and limit constants");
  auto* verify = app.add_subcommand("verify", "Run a verification suite and write certificates");
  auto* gamma = app.add_subcommand("gamma", "Escape probability from the series and by Monte Carlo");
  for (auto* sub : {simulate, exact, verify, gamma}) {
    sub->add_option("config", config, "YAML experiment config")->required();
  }
  verify->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"slln", "variance", "maxlocal", "conditions", "subsequence", "gamma", "truncation", "all"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*seed_opt) {
    options.has_seed = 1;
    options.seed = seed;
  }
  options.threads = threads;
  options.mem_cap_mb = mem_cap;
  options.out_dir = out_dir.c_str();
  options.verbose = quiet ? 0 : 1;

  ltw_status status = LTW_OK;
  if (*simulate) status = ltw_cmd_simulate(config.c_str(), &options);
  if (*exact) status = ltw_cmd_exact(config.c_str(), &options);
  if (*verify) status = ltw_cmd_verify(config.c_str(), suite.c_str(), &options);
  if (*gamma) status = ltw_cmd_gamma(config.c_str(), &options);

  if (status != LTW_OK) std::fprintf(stderr, "ltwalk: %s\n", ltw_last_error());
  return ltw_exit_code(status);
}
