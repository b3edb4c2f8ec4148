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

#include "ltwalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <boost/math/special_functions/digamma.hpp>

#include "ltwalk/error.hpp"
#include "ltwalk/exact_q.hpp"
#include "ltwalk/format.hpp"
#include "ltwalk/walk_generator.hpp"

namespace ltw {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(r) for r in [0, count) on up to `threads` workers with a fixed
// striding, so results only depend on r.
template <class Body>
void parallel_replicas(std::int64_t count, unsigned threads, Body body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::int64_t>(count, 1))));
  if (workers == 1) {
    for (std::int64_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t r = w; r < count; r += workers) body(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string alpha_channel(double alpha) { return "L(" + format_double(alpha) + ")"; }

double safe_limit(const Observable& f, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) return kNaN;
  try {
    return limit_constant(f, gamma);
  } catch (const Error&) {
    return kNaN;
  }
}

// sum_{k=lo}^{hi} k^{-q}
double power_range_sum(std::int64_t lo, std::int64_t hi, double q) {
  if (hi < lo) return 0.0;
  if (q == 1.0 && hi - lo > 1000000) {
    return boost::math::digamma(static_cast<double>(hi) + 1.0) - boost::math::digamma(static_cast<double>(lo));
  }
  if (hi - lo <= 2000000 || q <= 1.0) {
    double s = 0.0;
    for (std::int64_t k = hi; k >= lo; --k) s += std::pow(static_cast<double>(k), -q);
    return s;
  }
  // Direct head, Euler-Maclaurin for the rest.
  auto tail_from = [q](double a) {
    return std::pow(a, 1.0 - q) / (q - 1.0) + 0.5 * std::pow(a, -q) + q * std::pow(a, -q - 1.0) / 12.0 -
           q * (q + 1.0) * (q + 2.0) * std::pow(a, -q - 3.0) / 720.0;
  };
  const std::int64_t split = lo + 1000;
  return power_range_sum(lo, split - 1, q) + tail_from(static_cast<double>(split)) -
         tail_from(static_cast<double>(hi) + 1.0);
}

double harmonic_range(std::int64_t lo, std::int64_t hi) { return power_range_sum(lo, hi, 1.0); }

}  // namespace

std::vector<std::int64_t> CheckpointSchedule::points(std::int64_t horizon) const {
  if (first < 1) throw Error(ErrorCode::kInvalidArgument, "checkpoints.first must be >= 1");
  if (!(ratio > 1.0)) throw Error(ErrorCode::kInvalidArgument, "checkpoints.ratio must be > 1");
  std::vector<std::int64_t> out;
  for (double x = static_cast<double>(first); x <= static_cast<double>(horizon); x *= ratio) {
    out.push_back(std::llround(x));
  }
  for (auto e : extra) {
    if (e >= 1 && e <= horizon) out.push_back(e);
  }
  if (horizon >= 1) out.push_back(horizon);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  while (!out.empty() && out.back() > horizon) out.pop_back();
  return out;
}

void ExperimentConfig::validate() const {
  if (replicas < 1) throw Error(ErrorCode::kInvalidArgument, "replicas must be >= 1");
  if (!(schedule.ratio > 1.0)) throw Error(ErrorCode::kInvalidArgument, "checkpoints.ratio must be > 1");
  if (schedule.first < 1) throw Error(ErrorCode::kInvalidArgument, "checkpoints.first must be >= 1");
  if (horizon < schedule.first) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= checkpoints.first");
  if (threads < 1) throw Error(ErrorCode::kInvalidArgument, "threads must be >= 1");
}

GammaResolution resolve_gamma(const ExperimentConfig& config, std::size_t min_horizon) {
  GammaResolution g;
  SeriesOptions options;
  options.memory_cap_bytes = config.memory_cap_bytes;
  const std::size_t horizon = std::max({config.gamma_horizon, config.exact_horizon, min_horizon});
  if (config.gamma_pin) {
    const double pin = *config.gamma_pin;
    if (!(pin > 0.0 && pin <= 1.0)) throw Error(ErrorCode::kGammaOutOfRange, "pinned gamma must lie in (0, 1]");
    g.gamma = pin;
    g.source = "pinned";
    g.flag = pin == 1.0 ? TransienceFlag::kTrivialTransient : TransienceFlag::kTransient;
    try {
      g.series = std::make_shared<ReturnSeries>(make_return_series(config.dist, horizon, options));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMemoryCapExceeded) throw;
    }
    return g;
  }
  auto series = std::make_shared<ReturnSeries>(make_return_series(config.dist, horizon, options));
  g.gamma = series->gamma.gamma_estimate;
  g.error_bound = series->gamma.error_bound;
  g.flag = series->gamma.flag;
  g.source = "series";
  g.series = std::move(series);
  return g;
}

void require_transient(const GammaResolution& g, bool allow_recurrent) {
  if (g.flag == TransienceFlag::kRecurrent && !allow_recurrent) {
    throw Error(ErrorCode::kRecurrentWalkRefused,
                "gamma certificate is ~0 (" + g.source + "); set gamma.allow_recurrent to run anyway");
  }
}

void resolve_pending_observables(ExperimentConfig& config, double gamma) {
  if (config.pending.empty()) return;
  const double lambda = lambda_star(gamma);
  for (const auto& p : config.pending) {
    config.observables.at(p.index) = Observable::exp_capped(p.lambda_multiple * lambda, p.p);
  }
  config.pending.clear();
}

void enumerate_paths(const StepDistribution& dist, int n,
                     const std::function<void(double, std::span<const std::size_t>)>& visit, std::uint64_t max_paths) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "path length must be >= 0");
  const double total = std::pow(static_cast<double>(dist.size()), n);
  if (total > static_cast<double>(max_paths)) {
    throw Error(ErrorCode::kInvalidArgument, "exhaustive enumeration of " + format_double(total) + " paths refused");
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  const auto atoms = dist.atoms();
  while (true) {
    double w = 1.0;
    for (auto i : idx) w *= atoms[i].prob;
    visit(w, idx);
    int pos = 0;
    while (pos < n && ++idx[static_cast<std::size_t>(pos)] == atoms.size()) idx[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n) break;
  }
}

ExactMoments exhaustive_moments(const StepDistribution& dist, int n, const Observable& f) {
  std::vector<double> weights;
  std::vector<double> values;
  const auto atoms = dist.atoms();
  enumerate_paths(dist, n, [&](double w, std::span<const std::size_t> path) {
    LocalTimeState state(dist.dim(), {f});
    for (auto i : path) state.ingest_step(atoms[i].site);
    weights.push_back(w);
    values.push_back(state.running_G(0));
  });
  ExactMoments m;
  for (std::size_t i = 0; i < values.size(); ++i) m.mean += weights[i] * values[i];
  for (std::size_t i = 0; i < values.size(); ++i) m.variance += weights[i] * (values[i] - m.mean) * (values[i] - m.mean);
  return m;
}

std::vector<ReplicaTrace> simulate_replicas(const ExperimentConfig& config, std::span<const Observable> observables,
                                            std::span<const double> alphas, std::span<const std::int64_t> checkpoints,
                                            bool with_histograms) {
  config.validate();
  if (checkpoints.empty()) throw Error(ErrorCode::kInvalidArgument, "no checkpoints");
  const std::vector<Observable> obs(observables.begin(), observables.end());
  std::vector<ReplicaTrace> traces(static_cast<std::size_t>(config.replicas));
  const std::int64_t last = checkpoints.back();
  parallel_replicas(config.replicas, config.threads, [&](std::int64_t r) {
    WalkGenerator gen(config.dist, config.seed, static_cast<std::uint64_t>(r));
    LocalTimeState state(config.dist.dim(), obs);
    auto& out = traces[static_cast<std::size_t>(r)].checkpoints;
    out.reserve(checkpoints.size());
    std::size_t next = 0;
    while (next < checkpoints.size() && checkpoints[next] <= 0) {
      out.push_back(state.checkpoint(alphas, with_histograms));
      ++next;
    }
    for (std::int64_t t = 1; t <= last; ++t) {
      state.ingest_step(gen.next());
      if (t == checkpoints[next]) {
        out.push_back(state.checkpoint(alphas, with_histograms));
        ++next;
      }
    }
  });
  return traces;
}

ConvergenceReport aggregate_slln(const ExperimentConfig& config, const GammaResolution& gamma,
                                 std::span<const ReplicaTrace> traces, std::span<const std::int64_t> checkpoints,
                                 std::size_t chunk) {
  ConvergenceReport report;
  report.gamma = gamma.gamma;
  report.flag = gamma.flag;
  report.gamma_source = gamma.source;

  std::vector<Observable> channel_f = config.observables;
  for (double a : config.alphas) channel_f.push_back(Observable::power(a));
  for (const auto& f : config.observables) report.channels.push_back(f.label());
  for (double a : config.alphas) report.channels.push_back(alpha_channel(a));
  const std::size_t n_obs = config.observables.size();
  const std::size_t n_ch = channel_f.size();
  const std::size_t n_cp = checkpoints.size();

  auto value = [&](const Checkpoint& c, std::size_t ch) {
    const double raw = ch < n_obs ? c.g[ch] : c.l[ch - n_obs];
    return raw / static_cast<double>(c.n);
  };

  std::vector<RunningMoments> moments(n_ch * n_cp);
  const std::size_t step = chunk == 0 ? traces.size() : chunk;
  for (std::size_t begin = 0; begin < traces.size(); begin += step) {
    std::vector<RunningMoments> partial(n_ch * n_cp);
    const std::size_t end = std::min(traces.size(), begin + step);
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t k = 0; k < n_cp; ++k) {
        for (std::size_t ch = 0; ch < n_ch; ++ch) partial[ch * n_cp + k].add(value(traces[r].checkpoints[k], ch));
      }
    }
    for (std::size_t i = 0; i < moments.size(); ++i) moments[i].merge(partial[i]);
  }

  std::optional<ExactQTable> table;
  if (gamma.series) {
    const std::size_t h = std::min(config.exact_horizon, gamma.series->horizon);
    std::size_t needed = 0;
    for (auto n : checkpoints) {
      if (static_cast<std::size_t>(n) <= h) needed = std::max(needed, static_cast<std::size_t>(n));
    }
    if (needed > 0) table.emplace(gamma.series->f_tau, gamma.series->gamma.gamma_n, needed);
  }

  for (std::size_t ch = 0; ch < n_ch; ++ch) {
    const double limit = safe_limit(channel_f[ch], gamma.gamma);
    for (std::size_t k = 0; k < n_cp; ++k) {
      const auto& m = moments[ch * n_cp + k];
      ChannelRow row;
      row.channel = report.channels[ch];
      row.n = checkpoints[k];
      row.replicas = m.count();
      row.mean = m.mean();
      row.variance = m.variance();
      row.limit = limit;
      row.exact_mean = kNaN;
      if (table && static_cast<std::size_t>(row.n) <= table->horizon()) {
        row.exact_mean = table->expected_G([&](std::int64_t j) { return channel_f[ch](j); },
                                           static_cast<std::size_t>(row.n)) /
                         static_cast<double>(row.n);
      }
      const double reference = std::isfinite(row.exact_mean) ? row.exact_mean : limit;
      const double se = m.std_error();
      if (!std::isfinite(reference)) {
        row.z = kNaN;
      } else if (se > 0.0) {
        row.z = (row.mean - reference) / se;
      } else {
        const double gap = row.mean - reference;
        row.z = std::abs(gap) <= 1e-9 * std::max(1.0, std::abs(reference)) ? 0.0
                                                                           : std::copysign(INFINITY, gap);
      }
      row.l2_distance = std::isfinite(limit) ? std::sqrt(m.mean_square_about(limit)) : kNaN;
      if (!std::isfinite(row.exact_mean)) {
        row.cross_check = "n/a";
      } else {
        const double az = std::abs(row.z);
        row.cross_check = az <= 3.0 ? "ok" : (az <= 4.0 ? "flagged" : "fail");
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

ConvergenceReport run_slln(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  config.validate();
  const auto gamma = resolve_gamma(config);
  require_transient(gamma, config.allow_recurrent);
  if (!config.pending.empty()) resolve_pending_observables(config, gamma.gamma);
  const auto checkpoints = config.schedule.points(config.horizon);
  const auto traces = simulate_replicas(config, config.observables, config.alphas, checkpoints);
  return aggregate_slln(config, gamma, traces, checkpoints);
}

BoundCertificate certify_slln(const ConvergenceReport& report) {
  BoundCertificate cert;
  cert.name = "slln";
  cert.parameters.emplace_back("gamma", report.gamma);
  for (const auto& row : report.rows) {
    if (row.cross_check == "n/a") continue;
    Evidence e;
    e.x = static_cast<double>(row.n);
    e.value = row.mean;
    e.reference = row.exact_mean;
    e.holds = row.cross_check != "fail";
    e.note = row.channel + " exact cross-check z=" + format_double(row.z) + " (" + row.cross_check + ")";
    cert.evidence.push_back(e);
  }
  for (const auto& channel : report.channels) {
    const ChannelRow* first = nullptr;
    const ChannelRow* last = nullptr;
    for (const auto& row : report.rows) {
      if (row.channel != channel || !std::isfinite(row.l2_distance)) continue;
      if (!first) first = &row;
      last = &row;
    }
    if (!first || first == last) continue;
    Evidence e;
    e.x = static_cast<double>(last->n);
    e.value = last->l2_distance;
    e.reference = first->l2_distance;
    e.holds = last->l2_distance <= first->l2_distance;
    e.note = channel + " L2 distance to limit " + format_double(last->limit) + " vs n=" + std::to_string(first->n);
    cert.evidence.push_back(e);
  }
  cert.verdict = cert.replay();
  cert.detail = to_string(cert.verdict);
  return cert;
}

BoundCertificate verify_variance(const ExperimentConfig& config, const Observable& f) {
  config.validate();
  if (config.replicas < 50 && !config.exhaustive) {
    throw Error(ErrorCode::kInvalidArgument, "variance verification needs replicas >= 50");
  }
  const auto checkpoints = config.schedule.points(config.horizon);
  if (config.variance_split == VarianceSplit::kRefuse && !f.is_non_decreasing_up_to(config.horizon)) {
    throw Error(ErrorCode::kNotMonotone, f.label() + " is not non-decreasing; enable the split");
  }
  const auto gamma = resolve_gamma(config, static_cast<std::size_t>(checkpoints.back()));
  require_transient(gamma, config.allow_recurrent);
  if (!gamma.series || gamma.series->horizon < static_cast<std::size_t>(checkpoints.back())) {
    throw Error(ErrorCode::kMemoryCapExceeded, "variance bound needs the return series up to n_max");
  }
  const double g = gamma.flag == TransienceFlag::kTrivialTransient ? 1.0 : gamma.gamma;

  BoundCertificate cert;
  cert.name = "variance";
  cert.parameters.emplace_back("gamma", g);
  cert.parameters.emplace_back("replicas", static_cast<double>(config.replicas));

  std::vector<std::int64_t> sampled;
  for (auto n : checkpoints) {
    if (config.exhaustive && n <= 12 && std::pow(static_cast<double>(config.dist.size()), n) <= 1 << 22) {
      const auto exact = exhaustive_moments(config.dist, static_cast<int>(n), f);
      const double bound = variance_bound(f, n, *gamma.series, g, config.variance_split);
      Evidence e;
      e.x = static_cast<double>(n);
      e.value = exact.variance;
      e.reference = bound;
      e.holds = exact.variance <= bound * (1.0 + 1e-12) + 1e-15;
      e.note = f.label() + " exhaustive Var G_n";
      cert.evidence.push_back(e);
    } else {
      sampled.push_back(n);
    }
  }
  std::string trend;
  if (!sampled.empty()) {
    if (config.replicas < 50) throw Error(ErrorCode::kInvalidArgument, "variance verification needs replicas >= 50");
    const std::vector<Observable> obs{f};
    const auto traces = simulate_replicas(config, obs, {}, sampled);
    for (std::size_t k = 0; k < sampled.size(); ++k) {
      RunningMoments m;
      for (const auto& t : traces) m.add(t.checkpoints[k].g[0]);
      const double var = m.variance();
      const Interval ci = var > 0.0 ? variance_confidence(var, m.count(), 0.99) : Interval{0.0, 0.0};
      const double bound = variance_bound(f, sampled[k], *gamma.series, g, config.variance_split);
      Evidence e;
      e.x = static_cast<double>(sampled[k]);
      e.value = var;
      e.reference = bound;
      e.holds = bound >= ci.lower;
      e.note = f.label() + " Var G_n 99% CI [" + format_double(ci.lower) + ", " + format_double(ci.upper) + "]";
      cert.evidence.push_back(e);
      const double n = static_cast<double>(sampled[k]);
      trend += (trend.empty() ? "" : " ") + format_double(var / (n * n));
    }
  }
  cert.verdict = cert.replay();
  cert.detail = to_string(cert.verdict) + (trend.empty() ? "" : "; Var(G_n/n): " + trend);
  return cert;
}

GammaMcResult estimate_gamma_mc(const ExperimentConfig& config, std::int64_t n) {
  if (config.replicas < 100) throw Error(ErrorCode::kInvalidArgument, "gamma Monte Carlo needs replicas >= 100");
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "gamma Monte Carlo horizon must be >= 1");
  const int d = config.dist.dim();
  std::vector<std::int64_t> steps;
  for (const auto& a : config.dist.atoms()) steps.insert(steps.end(), a.site.begin(), a.site.end());
  std::vector<char> escaped(static_cast<std::size_t>(config.replicas), 0);
  parallel_replicas(config.replicas, config.threads, [&](std::int64_t r) {
    WalkGenerator gen(config.dist, config.seed, static_cast<std::uint64_t>(r));
    std::vector<std::int64_t> pos(static_cast<std::size_t>(d), 0);
    for (std::int64_t t = 1; t <= n; ++t) {
      const std::int64_t* s = &steps[gen.next_index() * static_cast<std::size_t>(d)];
      bool origin = true;
      for (int i = 0; i < d; ++i) {
        pos[static_cast<std::size_t>(i)] += s[i];
        origin = origin && pos[static_cast<std::size_t>(i)] == 0;
      }
      if (origin) return;
    }
    escaped[static_cast<std::size_t>(r)] = 1;
  });
  GammaMcResult res;
  res.horizon = n;
  res.trials = config.replicas;
  for (char e : escaped) res.escapes += e;
  res.gamma_hat = static_cast<double>(res.escapes) / static_cast<double>(res.trials);
  res.ci = wilson_interval(res.escapes, res.trials, 0.95);
  return res;
}

MaxLocalReport run_maxlocal(const ExperimentConfig& config) {
  const auto gamma = resolve_gamma(config);
  require_transient(gamma, config.allow_recurrent);
  return run_maxlocal(config, gamma.flag == TransienceFlag::kTrivialTransient ? 1.0 : gamma.gamma);
}

MaxLocalReport run_maxlocal(const ExperimentConfig& config, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::kGammaOutOfRange, "gamma must lie in (0, 1]");
  const auto checkpoints = config.schedule.points(config.horizon);
  const auto traces = simulate_replicas(config, {}, {}, checkpoints);
  MaxLocalReport report;
  report.gamma = gamma;
  report.lambda = gamma < 1.0 ? lambda_star(gamma) : INFINITY;
  const double reps = static_cast<double>(config.replicas);
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const std::int64_t n = checkpoints[k];
    std::vector<std::int64_t> lmax;
    for (const auto& t : traces) lmax.push_back(t.checkpoints[k].l_max);
    MaxLocalCheckpoint cp;
    cp.n = n;
    cp.min_lmax = *std::min_element(lmax.begin(), lmax.end());
    cp.max_lmax = *std::max_element(lmax.begin(), lmax.end());
    double sum = 0.0;
    for (auto v : lmax) sum += static_cast<double>(v);
    cp.mean_lmax = sum / reps;
    cp.mean_over_log_n = n > 1 ? cp.mean_lmax / std::log(static_cast<double>(n)) : kNaN;
    cp.proposition_bound = kNaN;
    if (gamma == 1.0) {
      cp.proposition_bound = 1.0;
    } else {
      try {
        cp.proposition_bound =
            maxlocal_proposition_bound(static_cast<double>(n), config.maxlocal.epsilon, config.maxlocal.m, gamma);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kIteratedLogUndefined) throw;
      }
    }
    if (std::isfinite(cp.proposition_bound)) {
      std::int64_t above = 0;
      for (auto v : lmax) above += static_cast<double>(v) > cp.proposition_bound ? 1 : 0;
      cp.violation_fraction = static_cast<double>(above) / reps;
    }
    report.checkpoints.push_back(cp);

    std::vector<std::int64_t> grid = config.maxlocal.t_grid;
    if (grid.empty()) {
      for (std::int64_t t = 1; t <= std::min<std::int64_t>(cp.max_lmax + 2, 400); ++t) grid.push_back(t);
    }
    for (auto t : grid) {
      if (t < 1) continue;
      TailRow row;
      row.n = n;
      row.t = t;
      std::int64_t above = 0;
      for (auto v : lmax) above += v > t ? 1 : 0;
      row.empirical = static_cast<double>(above) / reps;
      row.bound = maxlocal_tail_bound(n, t, gamma);
      row.slack = 3.0 * std::sqrt(row.bound * (1.0 - row.bound) / reps);
      row.holds = row.empirical <= row.bound + row.slack + 1e-12;
      report.tail_rows.push_back(row);
    }
  }
  return report;
}

BoundCertificate certify_maxlocal(const MaxLocalReport& report, const MaxLocalSettings& settings) {
  BoundCertificate cert;
  cert.name = "maxlocal";
  cert.parameters = {{"gamma", report.gamma}, {"epsilon", settings.epsilon}, {"m", settings.m}};
  for (const auto& row : report.tail_rows) {
    Evidence e;
    e.x = static_cast<double>(row.t);
    e.value = row.empirical;
    e.reference = row.bound + row.slack;
    e.holds = row.holds;
    e.note = "maxlocal-tail n=" + std::to_string(row.n);
    cert.evidence.push_back(e);
  }
  for (std::size_t k = 0; k < report.checkpoints.size(); ++k) {
    const auto& cp = report.checkpoints[k];
    if (!std::isfinite(cp.proposition_bound)) continue;
    const bool final_point = k + 1 == report.checkpoints.size();
    Evidence e;
    e.x = static_cast<double>(cp.n);
    e.value = cp.violation_fraction;
    e.reference = settings.max_violation;
    e.holds = !final_point || cp.violation_fraction <= settings.max_violation;
    e.note = std::string("maxlocal-proposition bound=") + format_double(cp.proposition_bound) +
             (final_point ? "" : " (informational)") + " mean l(n)/log n=" + format_double(cp.mean_over_log_n);
    cert.evidence.push_back(e);
  }
  cert.verdict = cert.replay();
  cert.detail = to_string(cert.verdict) + "; 1/lambda*=" + format_double(1.0 / report.lambda);
  return cert;
}

Sequence inverse_power_sequence(double s) {
  Sequence seq;
  seq.v = [s](std::int64_t n) { return std::pow(static_cast<double>(n), -s); };
  seq.shape = s > 0.0 ? Sequence::kStrictlyDecreasing : (s == 0.0 ? Sequence::kConstant : Sequence::kStrictlyIncreasing);
  if (s >= 0.0) seq.weighted_sum = [s](std::int64_t lo, std::int64_t hi) { return power_range_sum(lo, hi, s + 1.0); };
  return seq;
}

Sequence constant_sequence(double c) {
  Sequence seq;
  seq.v = [c](std::int64_t) { return c; };
  seq.shape = Sequence::kConstant;
  seq.weighted_sum = [c](std::int64_t lo, std::int64_t hi) { return c * harmonic_range(lo, hi); };
  return seq;
}

Sequence named_sequence(const std::string& name) {
  if (name == "inverse_square") return inverse_power_sequence(2.0);
  if (name == "inverse") return inverse_power_sequence(1.0);
  if (name == "constant") return constant_sequence(1.0);
  throw Error(ErrorCode::kInvalidArgument, "unknown sequence '" + name + "'");
}

std::int64_t floor_power(double delta, std::int64_t k) {
  const double base = 1.0 + delta;
  long double x = 1.0L;
  for (std::int64_t i = 0; i < k / 2; ++i) x *= base;
  if (k % 2 != 0) x *= std::sqrt(static_cast<long double>(base));
  const long double r = std::nearbyint(x);
  // Integer powers land exactly; guard against x = 3.9999... from the root.
  if (std::abs(x - r) <= 1e-12L * x) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

SubsequencePlan build_subsequence(const Sequence& v, double delta, std::size_t count) {
  if (!(delta > 0.0 && delta < 3.0)) {
    throw Error(ErrorCode::kDeltaOutOfRange, "delta must lie in (0, 3) so that b = sqrt(1 + delta) is in (1, 2)");
  }
  SubsequencePlan plan;
  plan.delta = delta;
  plan.b = std::sqrt(1.0 + delta);
  std::int64_t k = 1;
  while (floor_power(delta, k) - floor_power(delta, k - 1) < 2) ++k;
  plan.k = k;

  std::int64_t scanned = 0;
  plan.min_block_harmonic = INFINITY;
  for (std::size_t r = 1; r <= count; ++r) {
    const std::int64_t lo = floor_power(delta, k + static_cast<std::int64_t>(r) - 2) + 1;
    const std::int64_t hi = floor_power(delta, k + static_cast<std::int64_t>(r) - 1);
    if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "empty block (internal)");
    std::int64_t best = lo;
    switch (v.shape) {
      case Sequence::kStrictlyDecreasing: best = hi; break;
      case Sequence::kStrictlyIncreasing:
      case Sequence::kConstant: best = lo; break;
      case Sequence::kUnknown: {
        scanned += hi - lo + 1;
        if (scanned > 100000000) {
          throw Error(ErrorCode::kInvalidArgument, "blocks too long to scan an unstructured sequence");
        }
        double best_v = v.v(lo);
        for (std::int64_t n = lo + 1; n <= hi; ++n) {
          const double x = v.v(n);
          if (std::isnan(x)) break;
          if (x < best_v) {
            best_v = x;
            best = n;
          }
        }
        if (std::isnan(best_v)) return plan;
        break;
      }
    }
    const double vb = v.v(best);
    if (std::isnan(vb)) break;
    if (vb < 0.0) throw Error(ErrorCode::kInvalidArgument, "sequence must be non-negative");
    plan.blocks.emplace_back(lo, hi);
    plan.n_r.push_back(best);
    plan.v_at.push_back(vb);
    plan.partial_sums.push_back((plan.partial_sums.empty() ? 0.0 : plan.partial_sums.back()) + vb);
    plan.min_block_harmonic = std::min(plan.min_block_harmonic, harmonic_range(lo, hi));
  }
  if (plan.n_r.empty()) return plan;

  const std::int64_t end = plan.blocks.back().second;
  if (v.weighted_sum) {
    plan.weighted_total = v.weighted_sum(1, end);
  } else {
    for (std::int64_t n = end; n >= 1; --n) plan.weighted_total += v.v(n) / static_cast<double>(n);
  }
  plan.evidence = plan.weighted_total / std::min(std::log(plan.b), plan.min_block_harmonic);

  const double root = std::sqrt(1.0 + delta);
  for (std::size_t r = 0; r + 1 < plan.n_r.size(); ++r) {
    const double next = static_cast<double>(plan.n_r[r + 1]);
    if (next > (1.0 + delta) * static_cast<double>(plan.n_r[r])) plan.ratios_hold = false;
    if (r >= 1 && root * static_cast<double>(plan.n_r[r - 1]) > next) plan.ratios_hold = false;
  }
  for (std::size_t r = 1; r < plan.partial_sums.size(); ++r) {
    // Each term is positive, so the sums increase strictly; in double the
    // stored sum stalls once v drops below half an ulp.
    if (!(plan.v_at[r] > 0.0) || plan.partial_sums[r] < plan.partial_sums[r - 1]) plan.sums_increasing = false;
  }
  plan.sums_bounded = plan.partial_sums.back() <= plan.evidence;
  return plan;
}

SubsequencePlan build_subsequence(std::span<const double> v_from_one, double delta, std::size_t count) {
  Sequence seq;
  seq.v = [v_from_one](std::int64_t n) {
    return n >= 1 && static_cast<std::size_t>(n) <= v_from_one.size() ? v_from_one[static_cast<std::size_t>(n - 1)]
                                                                       : kNaN;
  };
  return build_subsequence(seq, delta, count);
}

BoundCertificate certify_subsequence(const SubsequencePlan& plan) {
  BoundCertificate cert;
  cert.name = "subsequence";
  cert.parameters = {{"delta", plan.delta}, {"b", plan.b}, {"K", static_cast<double>(plan.k)}};
  const double root = std::sqrt(1.0 + plan.delta);
  for (std::size_t r = 0; r + 1 < plan.n_r.size(); ++r) {
    const double next = static_cast<double>(plan.n_r[r + 1]);
    Evidence up;
    up.x = static_cast<double>(r + 1);
    up.value = next;
    up.reference = (1.0 + plan.delta) * static_cast<double>(plan.n_r[r]);
    up.holds = up.value <= up.reference;
    up.note = "n_{r+1} <= (1+delta) n_r";
    cert.evidence.push_back(up);
    if (r >= 1) {
      Evidence low;
      low.x = static_cast<double>(r + 1);
      low.value = next;
      low.reference = root * static_cast<double>(plan.n_r[r - 1]);
      low.holds = low.value >= low.reference;
      low.note = "n_{r+1} >= sqrt(1+delta) n_{r-1}";
      cert.evidence.push_back(low);
    }
  }
  Evidence inc;
  inc.x = static_cast<double>(plan.n_r.size());
  inc.value = plan.partial_sums.empty() ? 0.0 : plan.partial_sums.back();
  inc.reference = plan.partial_sums.empty() ? 0.0 : plan.partial_sums.front();
  inc.holds = plan.sums_increasing;
  inc.note = "partial sums increasing";
  cert.evidence.push_back(inc);
  Evidence bounded;
  bounded.x = static_cast<double>(plan.n_r.size());
  bounded.value = inc.value;
  bounded.reference = plan.evidence;
  bounded.holds = plan.sums_bounded;
  bounded.note = "partial sums vs sum v_n/n / min(log b, block harmonic)";
  cert.evidence.push_back(bounded);
  cert.verdict = cert.replay();
  cert.detail = to_string(cert.verdict);
  return cert;
}

TruncationReport run_truncation_split(const ExperimentConfig& config, const Observable& f, TruncationCase which,
                                      double gamma) {
  const auto all = config.schedule.points(config.horizon);
  std::vector<std::int64_t> checkpoints;
  std::vector<Thresholds> cuts;
  TruncationReport report;
  report.observable = f.label();
  for (auto n : all) {
    try {
      cuts.push_back(truncation_thresholds(static_cast<double>(n), gamma, which, config.truncation.eta));
      checkpoints.push_back(n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIteratedLogUndefined) throw;
      report.skipped.push_back(n);
    }
  }
  if (checkpoints.empty()) {
    throw Error(ErrorCode::kIteratedLogUndefined, "no checkpoint has defined truncation thresholds");
  }
  const std::vector<Observable> obs{f};
  const auto traces = simulate_replicas(config, obs, {}, checkpoints, true);
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    SplitSummary sum;
    sum.n = checkpoints[k];
    const Thresholds& t = cuts[k];
    const double top = t.has_cut2 ? t.cut2 : t.cut1;
    for (std::size_t r = 0; r < traces.size(); ++r) {
      const Checkpoint& c = traces[r].checkpoints[k];
      SplitRow row;
      row.replica = static_cast<std::int64_t>(r);
      row.n = c.n;
      row.cut1 = t.cut1;
      row.cut2 = t.has_cut2 ? t.cut2 : kNaN;
      row.total = c.g[0];
      row.l_max = c.l_max;
      for (std::size_t j = 1; j < c.histogram.size(); ++j) {
        if (c.histogram[j] == 0) continue;
        const double jj = static_cast<double>(j);
        const double term = f(static_cast<std::int64_t>(j)) * static_cast<double>(c.histogram[j]);
        if (jj <= t.cut1) {
          row.head += term;
        } else if (t.has_cut2 && jj <= t.cut2) {
          row.middle += term;
        } else {
          row.remainder += term;
        }
      }
      const double err = std::abs(row.head + row.middle + row.remainder - row.total) / std::max(1.0, std::abs(row.total));
      sum.max_partition_error = std::max(sum.max_partition_error, err);
      sum.remainder_nonzero += row.remainder != 0.0 ? 1.0 : 0.0;
      sum.above_cut2 += static_cast<double>(row.l_max) > top ? 1.0 : 0.0;
      report.rows.push_back(row);
    }
    sum.remainder_nonzero /= static_cast<double>(traces.size());
    sum.above_cut2 /= static_cast<double>(traces.size());
    report.summaries.push_back(sum);
  }
  return report;
}

BoundCertificate certify_truncation(const TruncationReport& report) {
  BoundCertificate cert;
  cert.name = "truncation";
  for (const auto& s : report.summaries) {
    Evidence part;
    part.x = static_cast<double>(s.n);
    part.value = s.max_partition_error;
    // The running total carries O(n eps) rounding from incremental updates.
    part.reference = std::max(1e-12, 64.0 * static_cast<double>(s.n) * 2.220446049250313e-16);
    part.holds = s.max_partition_error <= part.reference;
    part.note = report.observable + " head+middle+remainder = G_n(f)";
    cert.evidence.push_back(part);
    Evidence incl;
    incl.x = static_cast<double>(s.n);
    incl.value = s.remainder_nonzero;
    incl.reference = s.above_cut2;
    incl.holds = s.remainder_nonzero <= s.above_cut2;
    incl.note = "remainder nonzero only when l(n) exceeds the top cut";
    cert.evidence.push_back(incl);
  }
  for (const auto& row : report.rows) {
    if (static_cast<double>(row.l_max) <= row.cut1 && (row.middle != 0.0 || row.remainder != 0.0)) {
      Evidence e;
      e.x = static_cast<double>(row.n);
      e.value = row.middle + row.remainder;
      e.holds = false;
      e.note = "replica " + std::to_string(row.replica) + " has mass above cut1 with l(n) <= cut1";
      cert.evidence.push_back(e);
    }
  }
  cert.verdict = cert.replay();
  cert.detail = to_string(cert.verdict);
  return cert;
}

std::vector<std::int64_t> default_condition_grid() {
  std::vector<std::int64_t> g;
  for (std::int64_t n = 2; n <= 1024; n *= 2) g.push_back(n);
  g.push_back(2000);
  return g;
}

}  // namespace ltw
