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

#include "ltwalk/observable.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltwalk/error.hpp"
#include "ltwalk/format.hpp"
#include "ltwalk/return_series.hpp"

namespace ltw {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string make_label(const Observable::Form& form) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const PowerForm& p) { os << "power(" << format_double(p.alpha) << ")"; },
                 [&](const IndicatorForm& ind) {
                   if (ind.cofinite && ind.members.empty()) {
                     os << "indicator(j>=1)";
                     return;
                   }
                   os << "indicator(" << (ind.cofinite ? "not{" : "{");
                   for (std::size_t k = 0; k < ind.members.size(); ++k) {
                     os << (k ? " " : "") << ind.members[k];
                   }
                   os << "})";
                 },
                 [&](const TableForm& t) {
                   os << "table(";
                   for (std::size_t k = 0; k < t.values.size(); ++k) {
                     os << (k ? " " : "") << format_double(t.values[k]);
                   }
                   os << ";" << to_string(t.tail) << ")";
                 },
                 [&](const ExpCappedForm& e) {
                   os << "exp_capped(" << format_double(e.c) << "," << format_double(e.p) << ")";
                 },
             },
             form);
  return os.str();
}

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// True when sum_{j>=1} term(j) settles: two consecutive dyadic blocks each
// contribute at most 1e-13 of the running total.
template <class Term>
bool partial_sums_converge(Term term) {
  double total = 0.0;
  int quiet_blocks = 0;
  std::int64_t j = 1;
  for (int block = 0; block < 25; ++block) {
    const std::int64_t end = std::int64_t{1} << (block + 1);
    double block_sum = 0.0;
    for (; j < end; ++j) block_sum += term(j);
    if (!std::isfinite(block_sum)) return false;
    total += block_sum;
    if (block >= 4 && std::abs(block_sum) <= 1e-13 * std::max(std::abs(total), 1e-300)) {
      if (++quiet_blocks >= 2) return true;
    } else {
      quiet_blocks = 0;
    }
  }
  return false;
}

}  // namespace

std::string to_string(TailRule rule) {
  switch (rule) {
    case TailRule::kZero: return "zero";
    case TailRule::kLast: return "last";
    case TailRule::kPowerExtrapolation: return "power";
  }
  return "?";
}

std::string to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::kSquareSummable: return "Satisfied(4)";
    case GrowthClass::kAbsoluteOnly: return "Satisfied(5)only";
    case GrowthClass::kUnclassified: return "Unclassified";
  }
  return "?";
}

Observable::Observable(Form form) : form_(std::move(form)) {
  std::visit(Overloaded{
                 [](const PowerForm& p) {
                   if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) {
                     throw Error(ErrorCode::kNegativeAlpha, "power observable needs alpha >= 0");
                   }
                 },
                 [](IndicatorForm&) {},
                 [this](const TableForm& t) {
                   if (t.values.empty()) throw Error(ErrorCode::kInvalidArgument, "empty table observable");
                   const std::size_t m = t.values.size();
                   if (t.tail == TailRule::kPowerExtrapolation && m >= 2 && t.values[m - 1] > 0.0 &&
                       t.values[m - 2] > 0.0) {
                     table_exponent_ = std::log(t.values[m - 1] / t.values[m - 2]) /
                                       std::log(static_cast<double>(m) / static_cast<double>(m - 1));
                   }
                 },
                 [](const ExpCappedForm& e) {
                   if (!std::isfinite(e.c) || !std::isfinite(e.p)) {
                     throw Error(ErrorCode::kInvalidArgument, "exp_capped parameters must be finite");
                   }
                 },
             },
             form_);
  if (auto* ind = std::get_if<IndicatorForm>(&form_)) {
    std::sort(ind->members.begin(), ind->members.end());
    ind->members.erase(std::unique(ind->members.begin(), ind->members.end()), ind->members.end());
    std::erase_if(ind->members, [](std::int64_t j) { return j < 1; });
  }
  label_ = make_label(form_);
}

Observable Observable::power(double alpha) { return Observable(PowerForm{alpha}); }

Observable Observable::indicator(std::vector<std::int64_t> members) {
  return Observable(IndicatorForm{std::move(members), false});
}

Observable Observable::indicator_cofinite(std::vector<std::int64_t> excluded) {
  return Observable(IndicatorForm{std::move(excluded), true});
}

Observable Observable::visited() { return indicator_cofinite({}); }

Observable Observable::table(std::vector<double> values, TailRule tail) {
  return Observable(TableForm{std::move(values), tail});
}

Observable Observable::exp_capped(double c, double p) { return Observable(ExpCappedForm{c, p}); }

double Observable::operator()(std::int64_t i) const {
  if (i <= 0) return 0.0;
  return std::visit(Overloaded{
                        [i](const PowerForm& p) {
                          if (p.alpha == 0.0) return 1.0;
                          if (p.alpha == 1.0) return static_cast<double>(i);
                          if (p.alpha == 2.0) return static_cast<double>(i) * static_cast<double>(i);
                          return std::pow(static_cast<double>(i), p.alpha);
                        },
                        [i](const IndicatorForm& ind) {
                          const bool listed = std::binary_search(ind.members.begin(), ind.members.end(), i);
                          return (listed != ind.cofinite) ? 1.0 : 0.0;
                        },
                        [i, this](const TableForm& t) {
                          const auto m = static_cast<std::int64_t>(t.values.size());
                          if (i <= m) return t.values[static_cast<std::size_t>(i - 1)];
                          switch (t.tail) {
                            case TailRule::kZero: return 0.0;
                            case TailRule::kLast: return t.values.back();
                            case TailRule::kPowerExtrapolation:
                              return t.values.back() *
                                     std::pow(static_cast<double>(i) / static_cast<double>(m), table_exponent_);
                          }
                          return 0.0;
                        },
                        [i](const ExpCappedForm& e) {
                          const double x = static_cast<double>(i);
                          return std::exp(e.c * x - e.p * std::log(x));
                        },
                    },
                    form_);
}

bool Observable::is_non_decreasing_up_to(std::int64_t horizon) const {
  double prev = 0.0;
  for (std::int64_t i = 1; i <= horizon; ++i) {
    const double cur = (*this)(i);
    if (cur < prev) return false;
    prev = cur;
  }
  return true;
}

GrowthClass check_condition_f(const Observable& f, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kGammaOutOfRange, "gamma must lie in (0,1)");
  }
  const double lambda = lambda_star(gamma);
  return std::visit(
      Overloaded{
          [](const PowerForm&) { return GrowthClass::kSquareSummable; },
          [](const IndicatorForm&) { return GrowthClass::kSquareSummable; },
          [&](const ExpCappedForm& e) {
            // f^2 j x^j = e^{(2c - lambda) j} j^{1 - 2p}; |f| x^j = e^{(c - lambda) j} j^{-p}.
            const double half = 0.5 * lambda;
            if (e.c < half && !nearly_equal(e.c, half)) return GrowthClass::kSquareSummable;
            if (nearly_equal(e.c, half) && e.p > 1.0) return GrowthClass::kSquareSummable;
            if (e.c < lambda && !nearly_equal(e.c, lambda)) return GrowthClass::kAbsoluteOnly;
            if (nearly_equal(e.c, lambda) && e.p > 1.0) return GrowthClass::kAbsoluteOnly;
            return GrowthClass::kUnclassified;
          },
          [&](const TableForm&) {
            const double log_x = std::log1p(-gamma);
            auto square_term = [&](std::int64_t j) {
              const double v = f(j);
              return v * v * static_cast<double>(j) * std::exp(log_x * static_cast<double>(j));
            };
            auto abs_term = [&](std::int64_t j) {
              return std::abs(f(j)) * std::exp(log_x * static_cast<double>(j));
            };
            if (partial_sums_converge(square_term)) return GrowthClass::kSquareSummable;
            if (partial_sums_converge(abs_term)) return GrowthClass::kAbsoluteOnly;
            return GrowthClass::kUnclassified;
          },
      },
      f.form());
}

MonotoneSplit split_monotone(const Observable& f, std::int64_t horizon) {
  if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, "split horizon must be >= 1");
  std::vector<double> up(static_cast<std::size_t>(horizon));
  std::vector<double> down(static_cast<std::size_t>(horizon));
  double prev = 0.0;
  double acc_up = 0.0;
  double acc_down = 0.0;
  for (std::int64_t i = 1; i <= horizon; ++i) {
    const double cur = f(i);
    const double delta = cur - prev;
    if (delta > 0) acc_up += delta;
    if (delta < 0) acc_down -= delta;
    up[static_cast<std::size_t>(i - 1)] = acc_up;
    down[static_cast<std::size_t>(i - 1)] = acc_down;
    prev = cur;
  }
  return {Observable::table(std::move(up), TailRule::kLast), Observable::table(std::move(down), TailRule::kLast)};
}

}  // namespace ltw
