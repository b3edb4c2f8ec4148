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

#ifndef LTWALK_EXPERIMENTS_HPP
#define LTWALK_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltwalk/bounds.hpp"
#include "ltwalk/local_time_state.hpp"
#include "ltwalk/observable.hpp"
#include "ltwalk/return_series.hpp"
#include "ltwalk/statistics.hpp"
#include "ltwalk/step_distribution.hpp"

namespace ltw {

struct CheckpointSchedule {
  std::int64_t first = 1;
  double ratio = 2.0;
  std::vector<std::int64_t> extra;

  // first, first*ratio, ... (rounded) up to the horizon, plus extra points,
  // plus the horizon itself; sorted and deduplicated.
  std::vector<std::int64_t> points(std::int64_t horizon) const;
};

// exp_capped observable whose c is given as a multiple of lambda*; resolved
// once gamma is known.
struct PendingExpCapped {
  std::size_t index = 0;
  double lambda_multiple = 1.0;
  double p = 0.0;
};

struct MaxLocalSettings {
  double epsilon = 0.5;
  int m = 1;
  std::vector<std::int64_t> t_grid;  // empty: 1 .. max observed l(n) + 2
  double max_violation = 0.05;
};

struct SubsequenceSettings {
  std::vector<double> deltas{0.5, 1.0, 2.0};
  std::size_t count = 50;
  std::string sequence = "inverse_square";  // inverse_square | inverse | constant
};

struct TruncationSettings {
  TruncationCase which = TruncationCase::kII;
  double eta = 0.5;
  // Index into observables; none means exp_capped(lambda*, 2.5).
  std::optional<std::size_t> observable;
};

struct ConditionSettings {
  ConditionMode mode;
  std::vector<std::int64_t> grid;  // empty: dyadic 2..2048 clipped to 2000
};

struct VerifyToggles {
  bool slln = true;
  bool variance = true;
  bool maxlocal = true;
  bool gamma = true;
  bool conditions = true;
};

struct ExperimentConfig {
  explicit ExperimentConfig(StepDistribution d) : dist(std::move(d)) {}

  StepDistribution dist;
  std::vector<Observable> observables;
  std::vector<PendingExpCapped> pending;
  std::vector<double> alphas;
  std::int64_t replicas = 1;
  std::int64_t horizon = 1;
  CheckpointSchedule schedule;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  std::optional<double> gamma_pin;
  std::size_t gamma_horizon = 2000;
  std::size_t exact_horizon = 1024;
  std::size_t memory_cap_bytes = std::size_t{1} << 30;
  bool allow_recurrent = false;
  bool exhaustive = false;

  VerifyToggles verify;
  VarianceSplit variance_split = VarianceSplit::kRefuse;
  std::int64_t gamma_mc_horizon = 10000;
  MaxLocalSettings maxlocal;
  ConditionSettings conditions;
  SubsequenceSettings subsequence;
  TruncationSettings truncation;

  // Checks R >= 1, ratio > 1, first >= 1, horizon >= first.
  void validate() const;
};

struct GammaResolution {
  double gamma = 0.0;
  double error_bound = 0.0;
  TransienceFlag flag = TransienceFlag::kTransient;
  std::string source;  // "pinned" or "series"
  std::shared_ptr<const ReturnSeries> series;  // null when the grid did not fit
};

// Pinned value when configured, else the series estimate. The series is
// computed to max(gamma_horizon, exact_horizon, min_horizon); when gamma is
// pinned a memory-cap failure only drops the series.
GammaResolution resolve_gamma(const ExperimentConfig& config, std::size_t min_horizon = 0);

// RecurrentWalkRefused for a recurrent verdict without override.
void require_transient(const GammaResolution& g, bool allow_recurrent);

// Replaces pending exp_capped entries using lambda*(gamma).
void resolve_pending_observables(ExperimentConfig& config, double gamma);

// Visits every length-n increment sequence with its probability; throws
// InvalidArgument past max_paths.
void enumerate_paths(const StepDistribution& dist, int n,
                     const std::function<void(double, std::span<const std::size_t>)>& visit,
                     std::uint64_t max_paths = std::uint64_t{1} << 22);

struct ExactMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Mean and variance of G_n(f) over all paths, weighted exactly.
ExactMoments exhaustive_moments(const StepDistribution& dist, int n, const Observable& f);

struct ReplicaTrace {
  std::vector<Checkpoint> checkpoints;
};

// One trace per replica, index r driven by (seed, r); replicas are spread
// over config.threads workers and stored by index.
std::vector<ReplicaTrace> simulate_replicas(const ExperimentConfig& config, std::span<const Observable> observables,
                                            std::span<const double> alphas, std::span<const std::int64_t> checkpoints,
                                            bool with_histograms = false);

struct ChannelRow {
  std::string channel;
  std::int64_t n = 0;
  std::int64_t replicas = 0;
  double mean = 0.0;       // of G_n / n
  double variance = 0.0;   // of G_n / n
  double exact_mean = 0.0; // E G_n / n; NaN past the exact horizon
  double limit = 0.0;      // NaN when the limit series diverges
  double z = 0.0;          // (mean - reference) / SE; reference is exact_mean when known, else limit
  double l2_distance = 0.0;  // (mean over replicas of (G_n/n - limit)^2)^{1/2}
  std::string cross_check;   // ok | flagged | fail | n/a
};

struct ConvergenceReport {
  double gamma = 0.0;
  TransienceFlag flag = TransienceFlag::kTransient;
  std::string gamma_source;
  std::vector<std::string> channels;
  std::vector<ChannelRow> rows;  // channel-major, checkpoints ascending
};

// Folds replica checkpoints into per-channel moments. chunk > 0 folds
// contiguous chunks separately and merges the partial moments afterwards.
ConvergenceReport aggregate_slln(const ExperimentConfig& config, const GammaResolution& gamma,
                                 std::span<const ReplicaTrace> traces, std::span<const std::int64_t> checkpoints,
                                 std::size_t chunk = 0);

ConvergenceReport run_slln(const ExperimentConfig& config);
BoundCertificate certify_slln(const ConvergenceReport& report);

BoundCertificate verify_variance(const ExperimentConfig& config, const Observable& f);

struct GammaMcResult {
  std::int64_t horizon = 0;
  std::int64_t trials = 0;
  std::int64_t escapes = 0;
  double gamma_hat = 0.0;
  Interval ci;
};

// Fraction of replicas with no return to the origin in 1..n (estimates
// gamma_n >= gamma), with a Wilson 95% interval. Needs R >= 100.
GammaMcResult estimate_gamma_mc(const ExperimentConfig& config, std::int64_t n);

struct TailRow {
  std::int64_t n = 0;
  std::int64_t t = 0;
  double empirical = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // 3 binomial standard errors at the bound
  bool holds = true;
};

struct MaxLocalCheckpoint {
  std::int64_t n = 0;
  std::int64_t min_lmax = 0;
  std::int64_t max_lmax = 0;
  double mean_lmax = 0.0;
  double mean_over_log_n = 0.0;
  double proposition_bound = 0.0;  // NaN where the iterated logs are undefined
  double violation_fraction = 0.0;
};

struct MaxLocalReport {
  double gamma = 0.0;
  double lambda = 0.0;
  std::vector<TailRow> tail_rows;
  std::vector<MaxLocalCheckpoint> checkpoints;
};

MaxLocalReport run_maxlocal(const ExperimentConfig& config);
MaxLocalReport run_maxlocal(const ExperimentConfig& config, double gamma);
BoundCertificate certify_maxlocal(const MaxLocalReport& report, const MaxLocalSettings& settings);

struct Sequence {
  enum Shape { kUnknown, kStrictlyDecreasing, kStrictlyIncreasing, kConstant };
  std::function<double(std::int64_t)> v;
  Shape shape = kUnknown;
  // sum_{n=lo}^{hi} v_n / n; accumulated term by term when empty.
  std::function<double(std::int64_t, std::int64_t)> weighted_sum;
};

// v_n = n^{-s}, strictly decreasing for s > 0.
Sequence inverse_power_sequence(double s);
Sequence constant_sequence(double c);
Sequence named_sequence(const std::string& name);

struct SubsequencePlan {
  double delta = 0.0;
  double b = 0.0;
  std::int64_t k = 0;
  std::vector<std::int64_t> n_r;
  std::vector<std::pair<std::int64_t, std::int64_t>> blocks;  // inclusive
  std::vector<double> v_at;
  std::vector<double> partial_sums;
  double weighted_total = 0.0;  // sum_{n <= last block end} v_n / n
  double min_block_harmonic = 0.0;
  double evidence = 0.0;        // weighted_total / min(log b, min block harmonic sum)
  bool ratios_hold = true;
  bool sums_increasing = true;
  bool sums_bounded = true;
};

// Blocks ([b^{K+r-2}]+1 .. [b^{K+r-1}]) with b = sqrt(1 + delta) and K the
// least k >= 1 with [b^k] - [b^{k-1}] >= 2; n_r minimizes v on block r
// (ties to the smallest index). DeltaOutOfRange unless 0 < delta < 3.
SubsequencePlan build_subsequence(const Sequence& v, double delta, std::size_t count);
SubsequencePlan build_subsequence(std::span<const double> v_from_one, double delta, std::size_t count);
BoundCertificate certify_subsequence(const SubsequencePlan& plan);

// floor(b^k) for b = sqrt(1 + delta), robust at integer powers.
std::int64_t floor_power(double delta, std::int64_t k);

struct SplitRow {
  std::int64_t replica = 0;
  std::int64_t n = 0;
  double cut1 = 0.0;
  double cut2 = 0.0;  // NaN in case i
  double total = 0.0;
  double head = 0.0;
  double middle = 0.0;
  double remainder = 0.0;
  std::int64_t l_max = 0;
};

struct SplitSummary {
  std::int64_t n = 0;
  double remainder_nonzero = 0.0;  // fraction of replicas
  double above_cut2 = 0.0;         // fraction with l(n) > cut2 (case ii) or > cut1 (case i)
  double max_partition_error = 0.0;
};

struct TruncationReport {
  std::string observable;
  std::vector<SplitRow> rows;
  std::vector<SplitSummary> summaries;
  std::vector<std::int64_t> skipped;  // checkpoints where the thresholds are undefined
};

TruncationReport run_truncation_split(const ExperimentConfig& config, const Observable& f, TruncationCase which,
                                      double gamma);
BoundCertificate certify_truncation(const TruncationReport& report);

// Default condition grid: dyadic points 2, 4, ..., 1024 plus 2000.
std::vector<std::int64_t> default_condition_grid();

}  // namespace ltw

#endif  // LTWALK_EXPERIMENTS_HPP
