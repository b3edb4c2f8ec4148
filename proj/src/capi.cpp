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

#include "ltwalk/ltwalk.h"

#include <iostream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "ltwalk/commands.hpp"
#include "ltwalk/error.hpp"
#include "ltwalk/exact_q.hpp"
#include "ltwalk/bounds.hpp"
#include "ltwalk/local_time_state.hpp"
#include "ltwalk/observable.hpp"
#include "ltwalk/return_series.hpp"
#include "ltwalk/step_distribution.hpp"
#include "ltwalk/walk_generator.hpp"

struct ltw_dist {
  ltw::StepDistribution dist;
};

struct ltw_observable {
  ltw::Observable f;
};

struct ltw_walk {
  ltw::WalkGenerator gen;
  ltw::LocalTimeState state;
};

struct ltw_series {
  ltw::ReturnSeries series;
};

namespace {

thread_local std::string g_last_error;

ltw_status fail(ltw_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

// Runs body, translating exceptions into status codes.
template <class F>
ltw_status guarded(F&& body) {
  try {
    body();
    return LTW_OK;
  } catch (const ltw::Error& e) {
    return fail(static_cast<ltw_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LTW_E_MEMORY_CAP_EXCEEDED, "MemoryCapExceeded: allocation failed");
  } catch (const std::exception& e) {
    return fail(LTW_E_INTERNAL, std::string("internal error: ") + e.what());
  } catch (...) {
    return fail(LTW_E_INTERNAL, "internal error");
  }
}

ltw_status null_arg(const char* what) { return fail(LTW_E_INVALID_ARGUMENT, std::string("InvalidArgument: null ") + what); }

ltw::RunOptions to_options(const ltw_run_options* o) {
  ltw::RunOptions r;
  if (!o) return r;
  if (o->has_seed) r.seed = o->seed;
  if (o->threads) r.threads = o->threads;
  if (o->mem_cap_mb) r.mem_cap_mb = o->mem_cap_mb;
  if (o->out_dir) r.out_dir = o->out_dir;
  if (o->verbose) r.log = &std::cout;
  return r;
}

ltw_status command_status(const ltw::CommandResult& r) {
  return r.all_hold ? LTW_OK : fail(LTW_VERIFICATION_FAILED, "verification failed: some certificate Fails");
}

}  // namespace

extern "C" {

const char* ltw_version(void) { return ltw::kToolVersion; }

const char* ltw_status_name(ltw_status status) {
  if (status == LTW_OK) return "Ok";
  if (status == LTW_VERIFICATION_FAILED) return "VerificationFailed";
  if (status == LTW_E_INTERNAL) return "Internal";
  if (status >= 1 && status <= 21) return ltw::to_string(static_cast<ltw::ErrorCode>(status));
  return "Unknown";
}

const char* ltw_last_error(void) { return g_last_error.c_str(); }

int ltw_exit_code(ltw_status status) {
  switch (status) {
    case LTW_OK: return 0;
    case LTW_VERIFICATION_FAILED: return 1;
    case LTW_E_MEMORY_CAP_EXCEEDED: return 3;
    default: return 2;
  }
}

ltw_status ltw_dist_simple(int dim, ltw_dist** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new ltw_dist{ltw::simple_walk(dim)}; });
}

ltw_status ltw_dist_biased(double p, ltw_dist** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new ltw_dist{ltw::biased_walk(p)}; });
}

ltw_status ltw_dist_custom(int dim, size_t n_atoms, const int64_t* sites, const double* probs, ltw_dist** out) {
  if (!out) return null_arg("out");
  if (n_atoms && (!sites || !probs)) return null_arg("atom arrays");
  if (dim < 1) return fail(LTW_E_INVALID_ARGUMENT, "InvalidArgument: dim must be >= 1");
  return guarded([&] {
    std::vector<ltw::Atom> atoms(n_atoms);
    for (size_t i = 0; i < n_atoms; ++i) {
      atoms[i].site.assign(sites + i * dim, sites + (i + 1) * dim);
      atoms[i].prob = probs[i];
    }
    *out = new ltw_dist{ltw::validate_distribution(std::move(atoms), dim)};
  });
}

int ltw_dist_dim(const ltw_dist* dist) { return dist ? dist->dist.dim() : 0; }
void ltw_dist_free(ltw_dist* dist) { delete dist; }

ltw_status ltw_observable_power(double alpha, ltw_observable** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new ltw_observable{ltw::Observable::power(alpha)}; });
}

ltw_status ltw_observable_indicator(const int64_t* members, size_t count, ltw_observable** out) {
  if (!out) return null_arg("out");
  if (count && !members) return null_arg("members");
  return guarded([&] {
    *out = new ltw_observable{ltw::Observable::indicator(std::vector<std::int64_t>(members, members + count))};
  });
}

ltw_status ltw_observable_exp_capped(double c, double p, ltw_observable** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new ltw_observable{ltw::Observable::exp_capped(c, p)}; });
}

ltw_status ltw_observable_eval(const ltw_observable* f, int64_t i, double* out) {
  if (!f || !out) return null_arg("argument");
  return guarded([&] { *out = f->f(i); });
}

void ltw_observable_free(ltw_observable* f) { delete f; }

ltw_status ltw_walk_create(const ltw_dist* dist, uint64_t seed, uint64_t replica,
                           const ltw_observable* const* observables, size_t n_observables, ltw_walk** out) {
  if (!dist || !out) return null_arg("argument");
  if (n_observables && !observables) return null_arg("observables");
  return guarded([&] {
    std::vector<ltw::Observable> fs;
    for (size_t i = 0; i < n_observables; ++i) {
      if (!observables[i]) throw ltw::Error(ltw::ErrorCode::kInvalidArgument, "null observable");
      fs.push_back(observables[i]->f);
    }
    *out = new ltw_walk{ltw::WalkGenerator(dist->dist, seed, replica),
                        ltw::LocalTimeState(dist->dist.dim(), std::move(fs))};
  });
}

ltw_status ltw_walk_advance(ltw_walk* walk, uint64_t steps) {
  if (!walk) return null_arg("walk");
  return guarded([&] {
    for (uint64_t k = 0; k < steps; ++k) walk->state.ingest_step(walk->gen.next());
  });
}

ltw_status ltw_walk_stats_get(const ltw_walk* walk, ltw_walk_stats* out) {
  if (!walk || !out) return null_arg("argument");
  *out = {walk->state.time(), walk->state.range(), walk->state.max_local_time()};
  return LTW_OK;
}

ltw_status ltw_walk_G(const ltw_walk* walk, size_t id, double* out) {
  if (!walk || !out) return null_arg("argument");
  return guarded([&] { *out = walk->state.running_G(id); });
}

ltw_status ltw_walk_L(const ltw_walk* walk, double alpha, double* out) {
  if (!walk || !out) return null_arg("argument");
  return guarded([&] { *out = walk->state.functional_L(alpha); });
}

ltw_status ltw_walk_histogram(const ltw_walk* walk, int64_t* buf, size_t cap, size_t* len) {
  if (!walk || !len) return null_arg("argument");
  if (cap && !buf) return null_arg("buf");
  const auto h = walk->state.histogram();
  *len = h.size();
  for (size_t j = 0; j < h.size() && j < cap; ++j) buf[j] = h[j];
  return LTW_OK;
}

void ltw_walk_free(ltw_walk* walk) { delete walk; }

ltw_status ltw_series_create(const ltw_dist* dist, size_t horizon, size_t mem_cap_mb, ltw_series** out) {
  if (!dist || !out) return null_arg("argument");
  return guarded([&] {
    ltw::SeriesOptions o;
    if (mem_cap_mb) o.memory_cap_bytes = mem_cap_mb << 20;
    *out = new ltw_series{ltw::make_return_series(dist->dist, horizon, o)};
  });
}

size_t ltw_series_horizon(const ltw_series* series) { return series ? series->series.horizon : 0; }

ltw_status ltw_series_u(const ltw_series* series, size_t n, double* out) {
  if (!series || !out) return null_arg("argument");
  if (n > series->series.horizon) return fail(LTW_E_HORIZON_EXCEEDED, "HorizonExceeded: n beyond series horizon");
  *out = series->series.u[n];
  return LTW_OK;
}

ltw_status ltw_series_f(const ltw_series* series, size_t n, double* out) {
  if (!series || !out) return null_arg("argument");
  if (n > series->series.horizon) return fail(LTW_E_HORIZON_EXCEEDED, "HorizonExceeded: n beyond series horizon");
  *out = series->series.f_tau[n];
  return LTW_OK;
}

ltw_status ltw_series_gamma(const ltw_series* series, ltw_gamma_info* out) {
  if (!series || !out) return null_arg("argument");
  const auto& g = series->series.gamma;
  out->estimate = g.gamma_estimate;
  out->error_bound = g.error_bound;
  out->gamma_n = g.gamma_n[series->series.horizon];
  out->upper = g.gamma_upper;
  out->flag = static_cast<int>(g.flag);
  return LTW_OK;
}

void ltw_series_free(ltw_series* series) { delete series; }

ltw_status ltw_exact_EQ(const ltw_series* series, size_t n, size_t j, double* out) {
  if (!series || !out) return null_arg("argument");
  if (n > series->series.horizon) return fail(LTW_E_HORIZON_EXCEEDED, "HorizonExceeded: n beyond series horizon");
  return guarded([&] { *out = ltw::exact_EQ(series->series.f_tau, series->series.gamma.gamma_n, n, j); });
}

ltw_status ltw_exact_EG(const ltw_series* series, const ltw_observable* f, size_t n, double* out) {
  if (!series || !f || !out) return null_arg("argument");
  if (n > series->series.horizon) return fail(LTW_E_HORIZON_EXCEEDED, "HorizonExceeded: n beyond series horizon");
  return guarded([&] { *out = ltw::exact_EG(series->series.f_tau, series->series.gamma.gamma_n, f->f, n); });
}

ltw_status ltw_limit_constant(const ltw_observable* f, double gamma, double tol, double* out) {
  if (!f || !out) return null_arg("argument");
  return guarded([&] { *out = ltw::limit_constant(f->f, gamma, tol); });
}

ltw_status ltw_lambda_star(double gamma, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = ltw::lambda_star(gamma); });
}

ltw_status ltw_maxlocal_tail_bound(int64_t n, int64_t t, double gamma, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = ltw::maxlocal_tail_bound(n, t, gamma); });
}

ltw_status ltw_maxlocal_proposition_bound(double n, double eps, int m, double gamma, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = ltw::maxlocal_proposition_bound(n, eps, m, gamma); });
}

void ltw_run_options_init(ltw_run_options* options) {
  if (options) *options = ltw_run_options{0, 0, 0, 0, nullptr, 0};
}

ltw_status ltw_cmd_simulate(const char* config_path, const ltw_run_options* options) {
  if (!config_path) return null_arg("config_path");
  ltw::CommandResult r;
  const auto s = guarded([&] { r = ltw::cmd_simulate(config_path, to_options(options)); });
  return s == LTW_OK ? command_status(r) : s;
}

ltw_status ltw_cmd_exact(const char* config_path, const ltw_run_options* options) {
  if (!config_path) return null_arg("config_path");
  ltw::CommandResult r;
  const auto s = guarded([&] { r = ltw::cmd_exact(config_path, to_options(options)); });
  return s == LTW_OK ? command_status(r) : s;
}

ltw_status ltw_cmd_verify(const char* config_path, const char* suite, const ltw_run_options* options) {
  if (!config_path || !suite) return null_arg("argument");
  ltw::CommandResult r;
  const auto s = guarded([&] { r = ltw::cmd_verify(config_path, suite, to_options(options)); });
  return s == LTW_OK ? command_status(r) : s;
}

ltw_status ltw_cmd_gamma(const char* config_path, const ltw_run_options* options) {
  if (!config_path) return null_arg("config_path");
  ltw::CommandResult r;
  const auto s = guarded([&] { r = ltw::cmd_gamma(config_path, to_options(options)); });
  return s == LTW_OK ? command_status(r) : s;
}

}  // extern "C"
