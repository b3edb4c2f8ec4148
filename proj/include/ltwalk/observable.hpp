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

#ifndef LTWALK_OBSERVABLE_HPP
#define LTWALK_OBSERVABLE_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ltw {

// f(i) = i^alpha, alpha >= 0.
struct PowerForm {
  double alpha = 0.0;
};

// f(i) = 1{i in J}. With cofinite = false, J = members; with cofinite = true,
// J = {1, 2, ...} minus members. indicator(j >= 1) is cofinite with no
// members.
struct IndicatorForm {
  std::vector<std::int64_t> members;
  bool cofinite = false;
};

enum class TailRule { kZero, kLast, kPowerExtrapolation };

// f(1..m) given explicitly; beyond m the tail rule applies.
struct TableForm {
  std::vector<double> values;
  TailRule tail = TailRule::kZero;
};

// f(i) = e^{c i} / i^p.
struct ExpCappedForm {
  double c = 0.0;
  double p = 0.0;
};

// A function f: Z+ -> R of the local time. f(0) = 0 for every form.
class Observable {
 public:
  using Form = std::variant<PowerForm, IndicatorForm, TableForm, ExpCappedForm>;

  explicit Observable(Form form);

  static Observable power(double alpha);
  static Observable indicator(std::vector<std::int64_t> members);
  static Observable indicator_cofinite(std::vector<std::int64_t> excluded);
  // indicator(j >= 1); G_n of it is the range.
  static Observable visited();
  static Observable table(std::vector<double> values, TailRule tail = TailRule::kZero);
  static Observable exp_capped(double c, double p);

  double operator()(std::int64_t i) const;

  const Form& form() const noexcept { return form_; }
  const std::string& label() const noexcept { return label_; }

  bool is_non_decreasing_up_to(std::int64_t horizon) const;

  friend bool operator==(const Observable& a, const Observable& b) { return a.label_ == b.label_; }

 private:
  Form form_;
  std::string label_;
  // Power-extrapolation exponent for TableForm.
  double table_exponent_ = 0.0;
};

std::string to_string(TailRule rule);

// Growth classes relative to the escape probability gamma:
//   kSquareSummable:   sum f(j)^2 j (1-gamma)^j < infinity
//   kAbsoluteOnly:     only sum |f(j)| (1-gamma)^j < infinity
//   kUnclassified:     neither could be established
enum class GrowthClass { kSquareSummable, kAbsoluteOnly, kUnclassified };

std::string to_string(GrowthClass c);

// Symbolic for power, indicator and exp_capped forms; partial-sum heuristic
// for tables. Throws GammaOutOfRange unless gamma in (0, 1).
GrowthClass check_condition_f(const Observable& f, double gamma);

// f = increasing - decreasing with both parts non-decreasing, f(0) = 0,
// built from the positive and negative parts of f(i) - f(i-1). Tables cover
// 1..horizon; beyond it the last value is held.
struct MonotoneSplit {
  Observable increasing;
  Observable decreasing;
};

MonotoneSplit split_monotone(const Observable& f, std::int64_t horizon);

}  // namespace ltw

#endif  // LTWALK_OBSERVABLE_HPP
