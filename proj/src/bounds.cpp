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

#include "ltwalk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ltwalk/error.hpp"
#include "ltwalk/exact_q.hpp"
#include "ltwalk/format.hpp"

namespace ltw {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// f^2 in the same form family, so the support cap of exact_EG still applies.
Observable squared(const Observable& f) {
  return std::visit(Overloaded{
                        [](const PowerForm& p) { return Observable::power(2.0 * p.alpha); },
                        [&](const IndicatorForm&) { return f; },
                        [](const TableForm& t) {
                          std::vector<double> sq;
                          for (double v : t.values) sq.push_back(v * v);
                          return Observable::table(std::move(sq), t.tail);
                        },
                        [](const ExpCappedForm& e) { return Observable::exp_capped(2.0 * e.c, 2.0 * e.p); },
                    },
                    f.form());
}

double monotone_bound(const Observable& f, std::int64_t n, const ReturnSeries& series, double gamma) {
  const auto nn = static_cast<std::size_t>(n);
  const double second_moment = exact_EG(series.f_tau, series.gamma.gamma_n, squared(f), nn);
  const double log_x = std::log1p(-gamma);
  double weight = 0.0;
  double prev = 0.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    const double cur = f(i);
    const double term = cur * (cur - prev);
    if (term != 0.0) weight += term * std::exp(log_x * static_cast<double>(i - 1));
    prev = cur;
  }
  double returns = 0.0;
  for (std::int64_t r = 1; r < n; ++r) {
    returns += static_cast<double>(r) * static_cast<double>(n - r) * series.u[static_cast<std::size_t>(r)];
  }
  return second_moment + 4.0 * weight * returns;
}

}  // namespace

std::string to_string(Verdict v) { return v == Verdict::kHolds ? "Holds" : "Fails"; }

Verdict BoundCertificate::replay() const {
  for (const auto& e : evidence) {
    if (!e.holds) return Verdict::kFails;
  }
  return Verdict::kHolds;
}

double variance_bound(const Observable& f, std::int64_t n, const ReturnSeries& series, double gamma,
                      VarianceSplit split) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 0");
  if (static_cast<std::size_t>(n) > series.horizon) {
    throw Error(ErrorCode::kHorizonExceeded, "variance bound at n = " + std::to_string(n) +
                                                 " needs the return series to that horizon");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::kGammaOutOfRange, "gamma must lie in (0, 1]");
  if (n == 0) return 0.0;
  if (f.is_non_decreasing_up_to(n)) return monotone_bound(f, n, series, gamma);
  if (split == VarianceSplit::kRefuse) {
    throw Error(ErrorCode::kNotMonotone, f.label() + " decreases somewhere in 1.." + std::to_string(n));
  }
  const auto parts = split_monotone(f, n);
  return 2.0 * monotone_bound(parts.increasing, n, series, gamma) +
         2.0 * monotone_bound(parts.decreasing, n, series, gamma);
}

BoundCertificate condition_check(std::span<const double> u, ConditionMode mode, std::span<const std::int64_t> grid) {
  BoundCertificate cert;
  cert.name = mode.kind == ConditionMode::kEta ? "condition-7" : "condition-8";
  if (mode.kind == ConditionMode::kEta && !(mode.eta > 0.0 && mode.eta < 1.0)) {
    throw Error(ErrorCode::kParameterOutOfRange, "eta must lie in (0, 1)");
  }
  std::vector<std::int64_t> points(grid.begin(), grid.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty() || points.front() < 1) throw Error(ErrorCode::kInvalidArgument, "grid must hold n >= 1");
  if (static_cast<std::size_t>(points.back()) >= u.size()) {
    throw Error(ErrorCode::kHorizonExceeded, "grid reaches n = " + std::to_string(points.back()) +
                                                 " but u stops at " + std::to_string(u.size() - 1));
  }
  auto envelope = [&](double n) {
    return mode.kind == ConditionMode::kEta ? std::pow(n, 1.0 - mode.eta) : std::log(n);
  };

  // S(n) accumulated once along the grid.
  std::vector<double> s_at(points.size());
  double s = 0.0;
  std::int64_t k = 0;
  for (std::size_t g = 0; g < points.size(); ++g) {
    for (; k <= points[g]; ++k) s += static_cast<double>(k) * u[static_cast<std::size_t>(k)];
    s_at[g] = s;
  }

  std::vector<std::size_t> usable;
  double c = 0.0;
  for (std::size_t g = 0; g < points.size(); ++g) {
    const double env = envelope(static_cast<double>(points[g]));
    if (env > 0.0) {
      usable.push_back(g);
      c = std::max(c, s_at[g] / env);
    }
  }
  if (usable.size() < 2) throw Error(ErrorCode::kInvalidArgument, "grid needs two points with a positive envelope");

  for (std::size_t g = 0; g < points.size(); ++g) {
    const double env = envelope(static_cast<double>(points[g]));
    Evidence e;
    e.x = static_cast<double>(points[g]);
    e.value = s_at[g];
    e.reference = env > 0.0 ? c * env : 0.0;
    e.holds = env > 0.0 ? s_at[g] <= e.reference * (1.0 + 1e-12) : true;
    e.note = env > 0.0 ? "S(n) vs C*envelope" : "envelope vanishes";
    cert.evidence.push_back(e);
  }

  // Growth of S(n)/envelope over the upper half of the grid.
  const std::size_t mid = usable[usable.size() / 2 == usable.size() - 1 ? 0 : usable.size() / 2];
  const std::size_t last = usable.back();
  const double r_mid = s_at[mid] / envelope(static_cast<double>(points[mid]));
  const double r_last = s_at[last] / envelope(static_cast<double>(points[last]));
  double slope = 0.0;
  if (r_last > 0.0) {
    slope = r_mid > 0.0 ? std::log(r_last / r_mid) /
                              std::log(static_cast<double>(points[last]) / static_cast<double>(points[mid]))
                        : std::numeric_limits<double>::infinity();
  }
  Evidence trend;
  trend.x = static_cast<double>(points[last]);
  trend.value = slope;
  trend.reference = kConditionSlopeTolerance;
  trend.holds = slope <= kConditionSlopeTolerance;
  trend.note = "log-slope of S(n)/envelope from n=" + std::to_string(points[mid]);
  cert.evidence.push_back(trend);

  cert.parameters.emplace_back("C", c);
  if (mode.kind == ConditionMode::kEta) cert.parameters.emplace_back("eta", mode.eta);
  cert.parameters.emplace_back("slope", slope);
  cert.verdict = cert.replay();
  cert.detail = (cert.verdict == Verdict::kHolds ? "Holds-on-grid" : "Fails-on-grid") + std::string(" C=") +
                format_double(c) + " slope=" + format_double(slope);
  return cert;
}

double maxlocal_tail_bound(std::int64_t n, std::int64_t t, double gamma) {
  if (t < 1) throw Error(ErrorCode::kInvalidArgument, "t must be >= 1");
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::kGammaOutOfRange, "gamma must lie in (0, 1]");
  return std::min(1.0, static_cast<double>(n) * std::pow(1.0 - gamma, static_cast<double>(t - 1)));
}

double iterated_log(double x, int m) {
  if (m < 0) throw Error(ErrorCode::kInvalidArgument, "iterated log order must be >= 0");
  for (int k = 1; k <= m; ++k) {
    if (!(x > 0.0)) {
      throw Error(ErrorCode::kIteratedLogUndefined, "log_(" + std::to_string(k) + ") needs a positive argument");
    }
    x = std::log(x);
  }
  return x;
}

double maxlocal_proposition_bound(double n, double eps, int m, double gamma) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be > 0");
  if (m < 0) throw Error(ErrorCode::kInvalidArgument, "m must be >= 0");
  const double lambda = lambda_star(gamma);
  double sum = 0.0;
  for (int k = 1; k <= m; ++k) sum += iterated_log(n, k);
  const double top = iterated_log(n, m + 1);
  if (!(top > 0.0)) {
    throw Error(ErrorCode::kIteratedLogUndefined,
                "log_(" + std::to_string(m + 1) + ") n <= 0 at n = " + format_double(n));
  }
  return 1.0 + (sum + (1.0 + eps) * top) / lambda;
}

Thresholds truncation_thresholds(double n, double gamma, TruncationCase c, double eta) {
  const double lambda = lambda_star(gamma);
  Thresholds t;
  if (c == TruncationCase::kI) {
    if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::kParameterOutOfRange, "eta must lie in (0, 1)");
    const double l1 = iterated_log(n, 1);
    if (!(l1 > 0.0)) throw Error(ErrorCode::kIteratedLogUndefined, "log n <= 0");
    t.cut1 = 0.5 * eta * l1 / lambda;
    return t;
  }
  const double l3 = iterated_log(n, 3);
  if (!(l3 > 0.0)) {
    throw Error(ErrorCode::kIteratedLogUndefined, "log_(3) n <= 0 at n = " + format_double(n));
  }
  const double l1 = std::log(n);
  t.cut1 = l1 / lambda;
  t.cut2 = (l1 + iterated_log(n, 2) + 2.0 * l3) / lambda;
  t.has_cut2 = true;
  return t;
}

}  // namespace ltw
