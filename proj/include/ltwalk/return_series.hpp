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

#ifndef LTWALK_RETURN_SERIES_HPP
#define LTWALK_RETURN_SERIES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ltwalk/step_distribution.hpp"

namespace ltw {

struct SeriesOptions {
  // Cap for the dense convolution grid (two buffers of doubles).
  std::size_t memory_cap_bytes = std::size_t{1} << 30;
  // Use combinatorial closed forms for simple and biased nearest-neighbour
  // walks.
  bool allow_closed_form = true;
  // Fail with DimensionUnsupported instead of falling back to the dense grid.
  bool require_closed_form = false;
};

// u_n = P{S_n = 0} for n = 0..horizon (u_0 = 1).
std::vector<double> compute_u_series(const StepDistribution& dist, std::size_t horizon,
                                     const SeriesOptions& options = {});

// Exact rational u_n; d = 1 and exact atom masses only.
std::vector<Rational> compute_u_series_exact(const StepDistribution& dist, std::size_t horizon);

// First-return law f_n = P{tau = n} from the renewal identity
// u_n = sum_{k=1}^n f_k u_{n-k}. Index 0 of the result is 0. Values in
// (-1e-10, 0) are clamped to 0; anything below -1e-10 throws
// NumericalNegativity.
std::vector<double> first_return_series(std::span<const double> u);
std::vector<Rational> first_return_series(std::span<const Rational> u);

// max_n |u_n - sum_{k<=n} f_k u_{n-k}| over 1..N.
double renewal_round_trip_error(std::span<const double> f_tau, std::span<const double> u);

enum class TransienceFlag { kTransient, kRecurrent, kTrivialTransient };

std::string to_string(TransienceFlag flag);

// Decay template for the tail of u_n on its period lattice:
// u_n ~ C rho^n n^{-exponent}; geometric means rho < 1 (walks with drift),
// otherwise rho = 1 and the tail is summable only for exponent > 1.
struct TailModel {
  bool geometric = false;
  double exponent = 0.5;
};

TailModel tail_model(const StepDistribution& dist);

struct GammaSummary {
  std::vector<double> gamma_n;  // gamma_n = 1 - sum_{k<=n} f_k = P{tau >= n+1}
  double gamma_upper = 1.0;     // min(gamma_N, 1 / sum_{n<=N} u_n)
  double gamma_estimate = 1.0;  // 1 / (sum_{n<=N} u_n + fitted tail of u)
  double error_bound = 0.0;     // disagreement with a fit anchored at 3N/4
  TransienceFlag flag = TransienceFlag::kTransient;
  std::size_t period = 0;       // gcd of return times seen; 0 when none
  double u_tail = 0.0;          // fitted sum_{n>N} u_n
};

GammaSummary gamma_summary(std::span<const double> f_tau, std::span<const double> u, const TailModel& model);

// Running gamma estimate using only u_0..u_n, for every n (NaN where no fit
// is possible yet).
std::vector<double> running_gamma_estimate(std::span<const double> u, const TailModel& model);

// lambda* = log(1 / (1 - gamma)). Throws GammaOutOfRange unless gamma in (0,1).
double lambda_star(double gamma);

struct ReturnSeries {
  std::size_t horizon = 0;
  std::vector<double> u;
  std::vector<double> f_tau;
  GammaSummary gamma;
};

ReturnSeries make_return_series(const StepDistribution& dist, std::size_t horizon, const SeriesOptions& options = {});

}  // namespace ltw

#endif  // LTWALK_RETURN_SERIES_HPP
