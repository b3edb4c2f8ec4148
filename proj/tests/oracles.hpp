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

// Brute-force oracles written without the library's enumeration code.
#ifndef LTWALK_TESTS_ORACLES_HPP
#define LTWALK_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

using Point = std::vector<std::int64_t>;

struct Step {
  Point site;
  double prob;
};

// Visits every length-n path with its probability and the full local-time
// map over times 0..n.
inline void for_each_path(const std::vector<Step>& steps, int n,
                          const std::function<void(double, const std::map<Point, std::int64_t>&, const std::vector<Point>&)>& visit) {
  const int dim = static_cast<int>(steps.front().site.size());
  std::vector<Point> path{Point(dim, 0)};
  std::function<void(int, double)> rec = [&](int depth, double prob) {
    if (depth == n) {
      std::map<Point, std::int64_t> lt;
      for (const auto& x : path) ++lt[x];
      visit(prob, lt, path);
      return;
    }
    for (const auto& s : steps) {
      Point next = path.back();
      for (int i = 0; i < dim; ++i) next[i] += s.site[i];
      path.push_back(next);
      rec(depth + 1, prob * s.prob);
      path.pop_back();
    }
  };
  rec(0, 1.0);
}

inline std::vector<Step> simple(int d) {
  std::vector<Step> out;
  for (int i = 0; i < d; ++i) {
    for (int sgn : {1, -1}) {
      Point e(d, 0);
      e[i] = sgn;
      out.push_back({e, 1.0 / (2.0 * d)});
    }
  }
  return out;
}

inline std::vector<Step> biased(double p) { return {{{1}, p}, {{-1}, 1.0 - p}}; }

// P{S_n = 0} and P{tau = n} for n = 0..horizon by enumeration.
struct Returns {
  std::vector<double> u;
  std::vector<double> f;
};

inline Returns returns(const std::vector<Step>& steps, int horizon) {
  Returns r{std::vector<double>(horizon + 1, 0.0), std::vector<double>(horizon + 1, 0.0)};
  r.u[0] = 1.0;
  for_each_path(steps, horizon, [&](double p, const auto&, const std::vector<Point>& path) {
    bool returned = false;
    for (int k = 1; k <= horizon; ++k) {
      bool zero = true;
      for (auto c : path[k]) zero = zero && c == 0;
      if (!zero) continue;
      r.u[k] += p;
      if (!returned) r.f[k] += p;
      returned = true;
    }
  });
  return r;
}

inline double binom(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// gamma^2 sum_j f(j) (1-gamma)^{j-1}, summed until terms are negligible.
inline double limit_by_summation(const std::function<double(std::int64_t)>& f, double gamma) {
  double acc = 0.0;
  double w = 1.0;
  for (std::int64_t j = 1; j < 200000; ++j) {
    const double term = f(j) * w;
    acc += term;
    if (j > 50 && std::abs(term) < 1e-18 * std::abs(acc)) break;
    w *= 1.0 - gamma;
  }
  return gamma * gamma * acc;
}

}  // namespace oracle

#endif  // LTWALK_TESTS_ORACLES_HPP
