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

#include "ltwalk/return_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "ltwalk/error.hpp"

namespace ltw {
namespace {

// a_m = P{simple 1-d walk at 0 after m steps} = C(m, m/2) / 2^m.
std::vector<double> central_binomial(std::size_t horizon) {
  std::vector<double> a(horizon + 1, 0.0);
  a[0] = 1.0;
  for (std::size_t m = 2; m <= horizon; m += 2) {
    a[m] = a[m - 2] * static_cast<double>(m - 1) / static_cast<double>(m);
  }
  return a;
}

// Binomial(n, p) pmf, built outward from the mode and normalized.
std::vector<double> binomial_row(std::size_t n, double p) {
  std::vector<double> w(n + 1, 0.0);
  const double q = 1.0 - p;
  const auto mode = std::min<std::size_t>(n, static_cast<std::size_t>(std::floor((n + 1) * p)));
  w[mode] = 1.0;
  for (std::size_t m = mode; m < n; ++m) {
    w[m + 1] = w[m] * static_cast<double>(n - m) / static_cast<double>(m + 1) * (p / q);
    if (w[m + 1] < 1e-300) break;
  }
  for (std::size_t m = mode; m > 0; --m) {
    w[m - 1] = w[m] * static_cast<double>(m) / static_cast<double>(n - m + 1) * (q / p);
    if (w[m - 1] < 1e-300) break;
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

// d-dimensional simple walk: the number of steps spent on the first axis is
// Binomial(n, 1/d); the remaining steps drive a (d-1)-dimensional simple walk.
std::vector<double> simple_u(int dim, std::size_t horizon) {
  const auto a = central_binomial(horizon);
  if (dim == 1) return a;
  std::vector<double> prev(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) prev[n] = a[n] * a[n];
  for (int k = 3; k <= dim; ++k) {
    std::vector<double> next(horizon + 1, 0.0);
    const double p = 1.0 / k;
    for (std::size_t n = 0; n <= horizon; n += 2) {
      const auto row = binomial_row(n, p);
      double s = 0.0;
      for (std::size_t m = 0; m <= n; m += 2) s += row[m] * a[m] * prev[n - m];
      next[n] = s;
    }
    prev = std::move(next);
  }
  return prev;
}

// u_{2k} = C(2k, k) (pq)^k.
std::vector<double> biased_u(double p, std::size_t horizon) {
  const double four_pq = 4.0 * p * (1.0 - p);
  std::vector<double> u(horizon + 1, 0.0);
  u[0] = 1.0;
  for (std::size_t m = 2; m <= horizon; m += 2) {
    u[m] = u[m - 2] * static_cast<double>(m - 1) / static_cast<double>(m) * four_pq;
  }
  return u;
}

// Padded box [-P, P]^d with P = L + R; only the interior |x|_inf <= L is
// updated, so gathers never leave the buffer and padding stays zero.
struct Box {
  std::int64_t inner = 0;
  std::int64_t pad = 0;
  std::int64_t width = 0;
  std::size_t cells = 0;
  std::vector<std::int64_t> offsets;
  std::vector<std::size_t> interior;
  std::size_t origin = 0;
};

Box make_box(const StepDistribution& dist, std::size_t horizon, std::size_t bytes_per_cell, std::size_t cap) {
  Box box;
  const int d = dist.dim();
  const std::int64_t r = dist.max_radius();
  box.inner = r * static_cast<std::int64_t>((horizon + 1) / 2);
  box.pad = box.inner + r;
  box.width = 2 * box.pad + 1;
  const long double cells = std::pow(static_cast<long double>(box.width), d);
  const long double bytes = cells * (bytes_per_cell + sizeof(std::size_t));
  if (bytes > static_cast<long double>(cap)) {
    throw Error(ErrorCode::kMemoryCapExceeded,
                "dense return-probability grid needs " + std::to_string(static_cast<double>(bytes) / 1048576.0) +
                    " MiB over the cap of " + std::to_string(cap / 1048576) +
                    " MiB; lower the horizon, pin gamma, or use the Monte Carlo estimate");
  }
  box.cells = static_cast<std::size_t>(cells);
  for (const auto& atom : dist.atoms()) {
    std::int64_t off = 0;
    std::int64_t stride = 1;
    for (int i = 0; i < d; ++i) {
      off += atom.site[i] * stride;
      stride *= box.width;
    }
    box.offsets.push_back(off);
  }
  std::vector<std::int64_t> coord(d, -box.pad);
  for (std::size_t idx = 0; idx < box.cells; ++idx) {
    bool inside = true;
    for (int i = 0; i < d; ++i) inside = inside && std::abs(coord[i]) <= box.inner;
    if (inside) box.interior.push_back(idx);
    for (int i = 0; i < d; ++i) {
      if (++coord[i] <= box.pad) break;
      coord[i] = -box.pad;
    }
  }
  std::size_t stride = 1;
  for (int i = 0; i < d; ++i) {
    box.origin += static_cast<std::size_t>(box.pad) * stride;
    stride *= static_cast<std::size_t>(box.width);
  }
  return box;
}

template <class T, class Mass>
std::vector<T> dense_u(const StepDistribution& dist, std::size_t horizon, std::size_t cap, Mass mass) {
  const Box box = make_box(dist, horizon, 2 * sizeof(T), cap);
  std::vector<T> cur(box.cells, T(0));
  std::vector<T> next(box.cells, T(0));
  std::vector<T> probs;
  for (const auto& atom : dist.atoms()) probs.push_back(mass(atom));
  cur[box.origin] = T(1);
  std::vector<T> u(horizon + 1, T(0));
  u[0] = T(1);
  for (std::size_t n = 1; n <= horizon; ++n) {
    for (std::size_t idx : box.interior) {
      T s(0);
      for (std::size_t a = 0; a < probs.size(); ++a) {
        const T& v = cur[static_cast<std::size_t>(static_cast<std::int64_t>(idx) - box.offsets[a])];
        if (v != T(0)) s += probs[a] * v;
      }
      next[idx] = s;
    }
    std::swap(cur, next);
    u[n] = cur[box.origin];
  }
  return u;
}

template <class T, class Fix>
std::vector<T> deconvolve(std::span<const T> u, Fix fix) {
  if (u.empty() || u[0] != T(1)) throw Error(ErrorCode::kInvalidArgument, "u_0 must equal 1");
  std::vector<T> f(u.size(), T(0));
  for (std::size_t n = 1; n < u.size(); ++n) {
    T s = u[n];
    for (std::size_t k = 1; k < n; ++k) {
      if (f[k] != T(0)) s -= f[k] * u[n - k];
    }
    f[n] = fix(s, n);
  }
  return f;
}

std::size_t lattice_period(std::span<const double> u) {
  std::size_t g = 0;
  for (std::size_t n = 1; n < u.size(); ++n) {
    if (u[n] > 0.0) g = std::gcd(g, n);
  }
  return g;
}

// Sum_{k >= a} k^{-s} for real a >= 1, s > 1 (Euler-Maclaurin).
double zeta_tail(double a, double s) {
  return std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) + s * std::pow(a, -s - 1.0) / 12.0 -
         s * (s + 1.0) * (s + 2.0) * std::pow(a, -s - 3.0) / 720.0;
}

// Fitted sum_{k > last} u_k, using u on the lattice {0, p, 2p, ...}.
// Infinite when the template is not summable.
double fitted_tail(std::span<const double> u, std::size_t last, std::size_t p, const TailModel& model) {
  const double s = model.exponent;
  const double ul = u[last];
  const double x = static_cast<double>(last);
  if (model.geometric && last >= 2 * p && u[last - p] > 0.0) {
    const double prev = static_cast<double>(last - p);
    const double r = ul / u[last - p] * std::pow(x / prev, s);
    if (r < 1.0) {
      double sum = 0.0;
      double rj = 1.0;
      for (std::size_t j = 1; j < 100000000; ++j) {
        rj *= r;
        const double term = ul * rj * std::pow(x / (x + static_cast<double>(j * p)), s);
        sum += term;
        if (term < 1e-18 * sum || term == 0.0) break;
      }
      return sum;
    }
  }
  if (s <= 1.0) return std::numeric_limits<double>::infinity();
  const double pp = static_cast<double>(p);
  const double c = ul * std::pow(x, s);
  return c * std::pow(pp, -s) * zeta_tail(x / pp + 1.0, s);
}

// Largest lattice point <= limit with u > 0, or 0.
std::size_t last_lattice_point(std::span<const double> u, std::size_t limit, std::size_t p) {
  for (std::size_t k = (limit / p) * p; k >= p; k -= p) {
    if (u[k] > 0.0) return k;
  }
  return 0;
}

}  // namespace

std::vector<double> compute_u_series(const StepDistribution& dist, std::size_t horizon, const SeriesOptions& options) {
  if (options.allow_closed_form) {
    if (auto d = as_simple_walk(dist)) return simple_u(*d, horizon);
    if (auto p = as_biased_walk(dist)) return biased_u(*p, horizon);
  }
  if (options.require_closed_form) {
    throw Error(ErrorCode::kDimensionUnsupported, "no closed form for " + dist.describe());
  }
  return dense_u<double>(dist, horizon, options.memory_cap_bytes, [](const Atom& a) { return a.prob; });
}

std::vector<Rational> compute_u_series_exact(const StepDistribution& dist, std::size_t horizon) {
  if (dist.dim() != 1) {
    throw Error(ErrorCode::kDimensionUnsupported, "rational return probabilities are implemented for d = 1 only");
  }
  if (!dist.has_exact()) throw Error(ErrorCode::kInvalidArgument, "distribution has no exact rational masses");
  return dense_u<Rational>(dist, horizon, std::size_t{1} << 30, [](const Atom& a) { return *a.exact; });
}

std::vector<double> first_return_series(std::span<const double> u) {
  return deconvolve<double>(u, [](double s, std::size_t n) {
    if (s < -1e-10) {
      throw Error(ErrorCode::kNumericalNegativity,
                  "f_" + std::to_string(n) + " = " + std::to_string(s) + " (inconsistent return series)");
    }
    return s < 0.0 ? 0.0 : s;
  });
}

std::vector<Rational> first_return_series(std::span<const Rational> u) {
  return deconvolve<Rational>(u, [](const Rational& s, std::size_t n) {
    if (s < 0) throw Error(ErrorCode::kNumericalNegativity, "exact f_" + std::to_string(n) + " is negative");
    return s;
  });
}

double renewal_round_trip_error(std::span<const double> f_tau, std::span<const double> u) {
  const std::size_t n_max = std::min(f_tau.size(), u.size());
  double worst = 0.0;
  for (std::size_t n = 1; n < n_max; ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += f_tau[k] * u[n - k];
    worst = std::max(worst, std::abs(s - u[n]));
  }
  return worst;
}

std::string to_string(TransienceFlag flag) {
  switch (flag) {
    case TransienceFlag::kTransient: return "Transient";
    case TransienceFlag::kRecurrent: return "Recurrent";
    case TransienceFlag::kTrivialTransient: return "TrivialTransient";
  }
  return "?";
}

TailModel tail_model(const StepDistribution& dist) {
  return TailModel{!dist.is_centered(), dist.difference_rank() / 2.0};
}

GammaSummary gamma_summary(std::span<const double> f_tau, std::span<const double> u, const TailModel& model) {
  if (u.empty() || f_tau.size() != u.size()) {
    throw Error(ErrorCode::kInvalidArgument, "f_tau and u must cover the same horizon");
  }
  const std::size_t horizon = u.size() - 1;
  GammaSummary g;
  g.gamma_n.assign(horizon + 1, 1.0);
  for (std::size_t n = 1; n <= horizon; ++n) g.gamma_n[n] = g.gamma_n[n - 1] - f_tau[n];
  double u_sum = 0.0;
  for (double x : u) u_sum += x;
  g.gamma_upper = std::min(g.gamma_n[horizon], 1.0 / u_sum);
  g.period = lattice_period(u);
  if (g.period == 0) {
    g.flag = TransienceFlag::kTrivialTransient;
    g.gamma_estimate = 1.0;
    g.error_bound = 0.0;
    return g;
  }
  const std::size_t last = last_lattice_point(u, horizon, g.period);
  g.u_tail = fitted_tail(u, last, g.period, model);
  if (!std::isfinite(g.u_tail) || g.gamma_n[horizon] < 1e-9) {
    g.flag = TransienceFlag::kRecurrent;
    g.gamma_estimate = 0.0;
    g.error_bound = g.gamma_upper;
    return g;
  }
  g.gamma_estimate = 1.0 / (u_sum + g.u_tail);
  // Same fit anchored at 3N/4. Template error decays like N^{-1} relative to
  // the tail, so the disagreement is a fraction of the error at N; the factor
  // 4 covers that with room for power templates up to s = 3/2.
  const std::size_t anchor = last_lattice_point(u, (3 * last) / 4, g.period);
  if (anchor >= 2 * g.period) {
    double partial = 0.0;
    for (std::size_t k = 0; k <= anchor; ++k) partial += u[k];
    const double alt = 1.0 / (partial + fitted_tail(u, anchor, g.period, model));
    g.error_bound = 4.0 * std::abs(g.gamma_estimate - alt) + 1e-13;
  } else {
    g.error_bound = g.gamma_upper;
  }
  return g;
}

std::vector<double> running_gamma_estimate(std::span<const double> u, const TailModel& model) {
  std::vector<double> out(u.size(), std::numeric_limits<double>::quiet_NaN());
  const std::size_t p = lattice_period(u);
  if (p == 0) {
    std::fill(out.begin(), out.end(), 1.0);
    return out;
  }
  double partial = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    partial += u[n];
    const std::size_t last = last_lattice_point(u, n, p);
    if (last < 2 * p) continue;
    double tail = fitted_tail(u, last, p, model);
    if (!std::isfinite(tail)) {
      out[n] = 0.0;
      continue;
    }
    // Points between last and n are zero; the tail starts after last.
    out[n] = 1.0 / (partial + tail);
  }
  return out;
}

double lambda_star(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kGammaOutOfRange, "lambda* needs gamma in (0, 1), got " + std::to_string(gamma));
  }
  return -std::log1p(-gamma);
}

ReturnSeries make_return_series(const StepDistribution& dist, std::size_t horizon, const SeriesOptions& options) {
  ReturnSeries s;
  s.horizon = horizon;
  s.u = compute_u_series(dist, horizon, options);
  s.f_tau = first_return_series(s.u);
  s.gamma = gamma_summary(s.f_tau, s.u, tail_model(dist));
  return s;
}

}  // namespace ltw
