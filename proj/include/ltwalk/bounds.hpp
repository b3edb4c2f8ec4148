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

#ifndef LTWALK_BOUNDS_HPP
#define LTWALK_BOUNDS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ltwalk/observable.hpp"
#include "ltwalk/return_series.hpp"

namespace ltw {

enum class Verdict { kHolds, kFails };

std::string to_string(Verdict v);

struct Evidence {
  double x = 0.0;         // grid point (n, t, r, ...)
  double value = 0.0;     // observed or computed quantity
  double reference = 0.0; // bound or envelope it is compared with
  bool holds = true;
  std::string note;
};

struct BoundCertificate {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<Evidence> evidence;
  Verdict verdict = Verdict::kHolds;
  std::string detail;

  // Verdict recomputed from the evidence rows.
  Verdict replay() const;
};

enum class VarianceSplit { kRefuse, kSplit };

// E G_n(f^2) + 4 sum_{i<=n} f(i) (f(i) - f(i-1)) (1-gamma)^{i-1} sum_{r<=n} r (n-r) u_r
// for non-decreasing f with f(0) = 0. Non-monotone f throws NotMonotone
// unless split is requested, in which case the bound is
// 2 B(f_1) + 2 B(f_2) for f = f_1 - f_2.
double variance_bound(const Observable& f, std::int64_t n, const ReturnSeries& series, double gamma,
                      VarianceSplit split = VarianceSplit::kRefuse);

struct ConditionMode {
  enum Kind { kEta, kLog };
  Kind kind = kLog;
  double eta = 0.5;
};

// Partial sums S(n) = sum_{k<=n} k u_k on the grid against n^{1-eta}
// (condition-7) or log n (condition-8). C is the smallest constant covering
// the grid; the verdict is Holds-on-grid when log(S/envelope) grows with
// log-slope <= 0.1 across the upper half of the grid.
BoundCertificate condition_check(std::span<const double> u, ConditionMode mode, std::span<const std::int64_t> grid);

inline constexpr double kConditionSlopeTolerance = 0.1;

// min(1, n (1-gamma)^{t-1}); gamma in (0, 1], t >= 1.
double maxlocal_tail_bound(std::int64_t n, std::int64_t t, double gamma);

// m-fold iterated logarithm; IteratedLogUndefined once an argument is <= 0.
double iterated_log(double x, int m);

// 1 + (log n + ... + log_(m) n + (1+eps) log_(m+1) n) / lambda*, i.e. the
// first m iterated logs enter plainly and the next one carries 1 + eps.
// Requires log_(m+1) n > 0.
double maxlocal_proposition_bound(double n, double eps, int m, double gamma);

enum class TruncationCase { kI, kII };

struct Thresholds {
  double cut1 = 0.0;
  double cut2 = 0.0;
  bool has_cut2 = false;
};

// Case ii: cut1 = log n / lambda*, cut2 = (log n + log_(2) n + 2 log_(3) n) / lambda*.
// Case i: cut1 = (eta / 2) log n / lambda*.
Thresholds truncation_thresholds(double n, double gamma, TruncationCase c, double eta = 0.5);

}  // namespace ltw

#endif  // LTWALK_BOUNDS_HPP
