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

#ifndef LTWALK_EXACT_Q_HPP
#define LTWALK_EXACT_Q_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ltwalk/observable.hpp"

namespace ltw {

// g2[m] = sum_{a=0}^{m} gamma_a gamma_{m-a}, m = 0..horizon.
std::vector<double> gamma_self_convolution(std::span<const double> gamma_n, std::size_t horizon);

// E Q_n(j) = sum_s f^{*(j-1)}(s) g2(n - s) for all n <= N. Rows stop once
// the clipped convolution power carries mass below 1e-20; larger j read 0.
class ExactQTable {
 public:
  ExactQTable(std::span<const double> f_tau, std::span<const double> gamma_n, std::size_t horizon);

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t j_max() const noexcept { return rows_.size(); }
  // HorizonExceeded for n > horizon.
  double expected_Q(std::size_t n, std::size_t j) const;
  double expected_G(const std::function<double(std::int64_t)>& f, std::size_t n) const;
  // |sum_j j E Q_n(j) - (n + 1)|
  double mass_defect(std::size_t n) const;

 private:
  std::size_t horizon_;
  std::vector<std::vector<double>> rows_;  // rows_[j - 1][n]
};

// Single value E Q_n(j); HorizonExceeded when n is past the series.
double exact_EQ(std::span<const double> f_tau, std::span<const double> gamma_n, std::size_t n, std::size_t j);

// E G_n(f) = sum_j f(j) E Q_n(j) at a single n. Costs about J (n/p)^2 / 2
// multiply-adds where p is the return period; the j loop ends when the
// remaining terms fall below 1e-15 of the running sum, or at j_limit.
double exact_EG(std::span<const double> f_tau, std::span<const double> gamma_n,
                const std::function<double(std::int64_t)>& f, std::size_t n, std::size_t j_limit = SIZE_MAX);
// Same, with the j loop capped at the support of finite indicators and
// zero-tail tables.
double exact_EG(std::span<const double> f_tau, std::span<const double> gamma_n, const Observable& f, std::size_t n);

// gamma^2 sum_j f(j) (1 - gamma)^{j-1}, truncated once the remainder envelope
// drops below tol. gamma in (0, 1]; gamma = 1 gives f(1). SeriesDivergent
// when f outgrows (1 - gamma)^{-j}.
double limit_constant(const Observable& f, double gamma, double tol = 1e-12);

}  // namespace ltw

#endif  // LTWALK_EXACT_Q_HPP
