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

#include "ltwalk/exact_q.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/zeta.hpp>

#include "ltwalk/error.hpp"
#include "ltwalk/return_series.hpp"

namespace ltw {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_horizon(std::span<const double> f_tau, std::span<const double> gamma_n, std::size_t n) {
  if (n >= gamma_n.size() || n >= f_tau.size()) {
    throw Error(ErrorCode::kHorizonExceeded, "n = " + std::to_string(n) + " is past the series horizon " +
                                                 std::to_string(std::min(f_tau.size(), gamma_n.size()) - 1));
  }
}

// Convolution powers of the defective first-return law restricted to the
// lattice {0, p, 2p, ...} and clipped at a horizon. Index i stands for time i*p.
class ClippedPowers {
 public:
  ClippedPowers(std::span<const double> f_tau, std::size_t horizon) {
    for (std::size_t k = 1; k <= horizon && k < f_tau.size(); ++k) {
      if (f_tau[k] > 0.0) period_ = std::gcd(period_, k);
    }
    if (period_ == 0) period_ = 1;
    size_ = horizon / period_ + 1;
    step_.assign(size_, 0.0);
    for (std::size_t i = 1; i < size_; ++i) step_[i] = f_tau[i * period_];
    first_step_ = 1;
    while (first_step_ < size_ && step_[first_step_] == 0.0) ++first_step_;
    power_.assign(size_, 0.0);
    power_[0] = 1.0;
  }

  std::size_t period() const { return period_; }
  std::span<const double> current() const { return power_; }
  std::size_t low() const { return low_; }

  double mass() const {
    double m = 0.0;
    for (std::size_t i = low_; i < size_; ++i) m += power_[i];
    return m;
  }

  // power <- power * step, dropping mass past the horizon.
  void advance() {
    std::vector<double> next(size_, 0.0);
    for (std::size_t k = first_step_; k < size_; ++k) {
      const double w = step_[k];
      if (w == 0.0) continue;
      for (std::size_t i = low_; i + k < size_; ++i) next[i + k] += w * power_[i];
    }
    power_.swap(next);
    low_ += first_step_;
  }

  bool exhausted() const { return low_ >= size_; }

 private:
  std::size_t period_ = 0;
  std::size_t size_ = 0;
  std::size_t first_step_ = 1;
  std::size_t low_ = 0;
  std::vector<double> step_;
  std::vector<double> power_;
};

double contract(const ClippedPowers& powers, std::span<const double> g2, std::size_t n) {
  const auto f = powers.current();
  const std::size_t p = powers.period();
  double s = 0.0;
  for (std::size_t i = powers.low(); i < f.size() && i * p <= n; ++i) s += f[i] * g2[n - i * p];
  return s;
}

// Sum of t_j for j >= start given t_start and a bound on every later ratio
// t_{j+1}/t_j, which must be non-increasing.
template <class Term, class Ratio>
double ratio_sum(std::int64_t start, double tol, Term term, Ratio ratio) {
  double sum = 0.0;
  for (std::int64_t j = start; j < start + 100000000; ++j) {
    const double t = term(j);
    sum += t;
    const double q = ratio(j);
    if (q < 1.0 && std::abs(t) * q / (1.0 - q) < tol) return sum;
  }
  throw Error(ErrorCode::kSeriesDivergent, "limit series did not settle");
}

}  // namespace

std::vector<double> gamma_self_convolution(std::span<const double> gamma_n, std::size_t horizon) {
  if (horizon >= gamma_n.size()) throw Error(ErrorCode::kHorizonExceeded, "gamma_n too short");
  std::vector<double> g2(horizon + 1, 0.0);
  for (std::size_t m = 0; m <= horizon; ++m) {
    double s = 0.0;
    for (std::size_t a = 0; a <= m; ++a) s += gamma_n[a] * gamma_n[m - a];
    g2[m] = s;
  }
  return g2;
}

ExactQTable::ExactQTable(std::span<const double> f_tau, std::span<const double> gamma_n, std::size_t horizon)
    : horizon_(horizon) {
  check_horizon(f_tau, gamma_n, horizon);
  const auto g2 = gamma_self_convolution(gamma_n, horizon);
  ClippedPowers powers(f_tau, horizon);
  for (std::size_t j = 1; j <= horizon + 1; ++j) {
    std::vector<double> row(horizon + 1, 0.0);
    for (std::size_t n = 0; n <= horizon; ++n) row[n] = contract(powers, g2, n);
    rows_.push_back(std::move(row));
    powers.advance();
    if (powers.exhausted() || powers.mass() < 1e-20) break;
  }
}

double ExactQTable::expected_Q(std::size_t n, std::size_t j) const {
  if (n > horizon_) throw Error(ErrorCode::kHorizonExceeded, "n past table horizon");
  if (j == 0) throw Error(ErrorCode::kInvalidArgument, "j must be >= 1");
  return j <= rows_.size() ? rows_[j - 1][n] : 0.0;
}

double ExactQTable::expected_G(const std::function<double(std::int64_t)>& f, std::size_t n) const {
  if (n > horizon_) throw Error(ErrorCode::kHorizonExceeded, "n past table horizon");
  double s = 0.0;
  for (std::size_t j = 1; j <= rows_.size(); ++j) {
    const double q = rows_[j - 1][n];
    if (q != 0.0) s += f(static_cast<std::int64_t>(j)) * q;
  }
  return s;
}

double ExactQTable::mass_defect(std::size_t n) const {
  return std::abs(expected_G([](std::int64_t j) { return static_cast<double>(j); }, n) - static_cast<double>(n + 1));
}

double exact_EQ(std::span<const double> f_tau, std::span<const double> gamma_n, std::size_t n, std::size_t j) {
  check_horizon(f_tau, gamma_n, n);
  if (j == 0) throw Error(ErrorCode::kInvalidArgument, "j must be >= 1");
  const auto g2 = gamma_self_convolution(gamma_n, n);
  ClippedPowers powers(f_tau, n);
  for (std::size_t k = 1; k < j; ++k) {
    powers.advance();
    if (powers.exhausted()) return 0.0;
  }
  return contract(powers, g2, n);
}

double exact_EG(std::span<const double> f_tau, std::span<const double> gamma_n,
                const std::function<double(std::int64_t)>& f, std::size_t n, std::size_t j_limit) {
  check_horizon(f_tau, gamma_n, n);
  const auto g2 = gamma_self_convolution(gamma_n, n);
  ClippedPowers powers(f_tau, n);
  const double scale = static_cast<double>(n + 1);
  j_limit = std::min(j_limit, n + 1);
  double acc = 0.0;
  for (std::size_t j = 1; j <= j_limit; ++j) {
    const double fj = f(static_cast<std::int64_t>(j));
    if (fj != 0.0) acc += fj * contract(powers, g2, n);
    if (j == j_limit) break;
    // E Q_n(j) <= (n + 1) * mass of the (j-1)-th power.
    const double here = std::abs(fj) * scale * powers.mass();
    powers.advance();
    if (powers.exhausted()) break;
    const double next = std::abs(f(static_cast<std::int64_t>(j + 1))) * scale * powers.mass();
    if (here > 0.0) {
      const double q = next / here;
      if (q < 1.0 && next / (1.0 - q) < 1e-15 * std::abs(acc)) break;
    }
  }
  return acc;
}

double exact_EG(std::span<const double> f_tau, std::span<const double> gamma_n, const Observable& f, std::size_t n) {
  std::size_t j_limit = n + 1;
  if (const auto* ind = std::get_if<IndicatorForm>(&f.form()); ind && !ind->cofinite) {
    j_limit = 0;
    for (auto m : ind->members) j_limit = std::max<std::size_t>(j_limit, m > 0 ? static_cast<std::size_t>(m) : 0);
    if (j_limit == 0) return 0.0;
  } else if (const auto* t = std::get_if<TableForm>(&f.form()); t && t->tail == TailRule::kZero) {
    j_limit = t->values.size();
  }
  return exact_EG(f_tau, gamma_n, [&f](std::int64_t j) { return f(j); }, n, j_limit);
}

double limit_constant(const Observable& f, double gamma, double tol) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::kGammaOutOfRange, "limit constant needs gamma in (0, 1]");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  if (gamma == 1.0) return f(1);
  const double x = 1.0 - gamma;
  const double log_x = std::log1p(-gamma);
  const double g2 = gamma * gamma;
  auto geometric = [&](std::int64_t j) { return g2 * std::exp(log_x * static_cast<double>(j - 1)); };

  return std::visit(
      Overloaded{
          [&](const PowerForm& p) {
            if (p.alpha == 0.0) return gamma;
            if (p.alpha == 1.0) return 1.0;
            if (p.alpha == 2.0) return (2.0 - gamma) / gamma;
            return ratio_sum(
                1, tol, [&](std::int64_t j) { return std::pow(static_cast<double>(j), p.alpha) * geometric(j); },
                [&](std::int64_t j) { return std::pow(1.0 + 1.0 / static_cast<double>(j), p.alpha) * x; });
          },
          [&](const IndicatorForm& ind) {
            double s = 0.0;
            for (auto j : ind.members) {
              if (j >= 1) s += geometric(j);
            }
            return ind.cofinite ? gamma - s : s;
          },
          [&](const TableForm& t) {
            const auto m = static_cast<std::int64_t>(t.values.size());
            double s = 0.0;
            for (std::int64_t j = 1; j <= m; ++j) s += t.values[static_cast<std::size_t>(j - 1)] * geometric(j);
            switch (t.tail) {
              case TailRule::kZero: return s;
              case TailRule::kLast: return s + t.values.back() * gamma * std::exp(log_x * static_cast<double>(m));
              case TailRule::kPowerExtrapolation: {
                const double beta = std::log(std::abs(f(m + 1)) / std::abs(t.values.back())) /
                                    std::log(static_cast<double>(m + 1) / static_cast<double>(m));
                const double b = std::isfinite(beta) ? std::max(beta, 0.0) : 0.0;
                return s + ratio_sum(
                               m + 1, tol, [&](std::int64_t j) { return f(j) * geometric(j); },
                               [&](std::int64_t j) { return std::pow(1.0 + 1.0 / static_cast<double>(j), b) * x; });
              }
            }
            return s;
          },
          [&](const ExpCappedForm& e) {
            const double lambda = -log_x;
            const double delta = e.c - lambda;
            const bool at_edge = std::abs(delta) <= 1e-12 * std::max(std::abs(e.c), lambda);
            if (at_edge) {
              if (e.p <= 1.0) {
                throw Error(ErrorCode::kSeriesDivergent, "exp_capped at c = lambda* needs p > 1");
              }
              // gamma^2 x^{-1} sum_j j^{-p}
              return g2 / x * boost::math::zeta(e.p);
            }
            if (delta > 0.0) {
              throw Error(ErrorCode::kSeriesDivergent, "exp_capped with c > lambda* = " + std::to_string(lambda));
            }
            auto term = [&](std::int64_t j) {
              const double jj = static_cast<double>(j);
              return g2 / x * std::exp(delta * jj - e.p * std::log(jj));
            };
            auto ratio = [&](std::int64_t j) {
              const double jj = static_cast<double>(j);
              return std::exp(delta) * std::pow(jj / (jj + 1.0), std::min(e.p, 0.0));
            };
            return ratio_sum(1, tol, term, ratio);
          },
      },
      f.form());
}

}  // namespace ltw
