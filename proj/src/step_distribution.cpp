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

#include "ltwalk/step_distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "ltwalk/error.hpp"

namespace ltw {
namespace {

using boost::multiprecision::cpp_int;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<Rational> parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  std::string_view whole = dot == std::string_view::npos ? s : s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (!whole.empty() && !all_digits(whole)) return std::nullopt;
  if (!frac.empty() && !all_digits(frac)) return std::nullopt;
  // cpp_int reads a leading 0 as octal.
  std::string digits = std::string(whole) + std::string(frac);
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  cpp_int num(digits.empty() ? std::string("0") : digits);
  cpp_int den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

}  // namespace

Probability parse_probability(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorCode::kInvalidArgument, "empty probability");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = parse_decimal(trim(s.substr(0, slash)));
    auto den = parse_decimal(trim(s.substr(slash + 1)));
    if (!num || !den || *den == 0) {
      throw Error(ErrorCode::kInvalidArgument, "malformed fraction '" + std::string(s) + "'");
    }
    Rational r = *num / *den;
    return {r.convert_to<double>(), r};
  }
  if (auto r = parse_decimal(s)) return {r->convert_to<double>(), *r};
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidArgument, "malformed probability '" + std::string(s) + "'");
  }
  return {value, std::nullopt};
}

StepDistribution::StepDistribution(int dim, std::vector<Atom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
  has_exact_ = std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.exact.has_value(); });
  for (const auto& a : atoms_) {
    for (auto c : a.site) max_radius_ = std::max<std::int64_t>(max_radius_, c < 0 ? -c : c);
  }
}

std::vector<double> StepDistribution::drift() const {
  std::vector<double> mean(static_cast<std::size_t>(dim_), 0.0);
  for (const auto& a : atoms_) {
    for (int i = 0; i < dim_; ++i) mean[i] += a.prob * static_cast<double>(a.site[i]);
  }
  return mean;
}

bool StepDistribution::is_centered(double tol) const {
  const auto mean = drift();
  return std::all_of(mean.begin(), mean.end(), [tol](double m) { return std::abs(m) <= tol; });
}

int StepDistribution::difference_rank() const {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 1; k < atoms_.size(); ++k) {
    std::vector<double> row(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
      row[i] = static_cast<double>(atoms_[k].site[i] - atoms_[0].site[i]);
    }
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < dim_ && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t pivot = rank;
    for (std::size_t r = rank; r < rows.size(); ++r) {
      if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
    }
    if (std::abs(rows[pivot][col]) < 1e-9) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const double factor = rows[r][col] / rows[rank][col];
      for (int c = col; c < dim_; ++c) rows[r][c] -= factor * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

std::string StepDistribution::describe() const {
  std::ostringstream os;
  os << "d=" << dim_ << " {";
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (k) os << ", ";
    os << '(';
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << atoms_[k].site[i];
    os << "):";
    if (atoms_[k].exact) {
      os << atoms_[k].exact->str();
    } else {
      os << atoms_[k].prob;
    }
  }
  os << '}';
  return os.str();
}

StepDistribution validate_distribution(std::vector<Atom> atoms, int dim) {
  if (dim < 1) throw Error(ErrorCode::kDimensionMismatch, "dimension must be >= 1");
  if (atoms.empty()) throw Error(ErrorCode::kEmptySupport, "no atoms given");
  for (const auto& a : atoms) {
    if (static_cast<int>(a.site.size()) != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "atom of dimension " + std::to_string(a.site.size()) +
                                                     " in a d=" + std::to_string(dim) + " law");
    }
    if (!std::isfinite(a.prob)) throw Error(ErrorCode::kInvalidArgument, "non-finite probability");
    if (a.prob < 0.0 || (a.exact && *a.exact < 0)) {
      throw Error(ErrorCode::kNegativeProbability, "atom with probability " + std::to_string(a.prob));
    }
  }

  // Merge duplicates, keeping first-occurrence order.
  std::vector<Atom> merged;
  std::map<Site, std::size_t> index;
  for (auto& a : atoms) {
    auto [it, inserted] = index.emplace(a.site, merged.size());
    if (inserted) {
      merged.push_back(std::move(a));
      continue;
    }
    Atom& m = merged[it->second];
    m.prob += a.prob;
    if (m.exact && a.exact) {
      *m.exact += *a.exact;
    } else {
      m.exact.reset();
    }
  }
  std::erase_if(merged, [](const Atom& a) { return a.prob == 0.0 && (!a.exact || *a.exact == 0); });
  if (merged.empty()) throw Error(ErrorCode::kEmptySupport, "all atoms have zero mass");

  double total = 0.0;
  for (const auto& a : merged) total += a.prob;
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kMassNotOne, "total mass " + std::to_string(total));
  }
  const bool exact = std::all_of(merged.begin(), merged.end(), [](const Atom& a) { return a.exact.has_value(); });
  if (exact) {
    Rational exact_total = 0;
    for (const auto& a : merged) exact_total += *a.exact;
    for (auto& a : merged) {
      *a.exact /= exact_total;
      a.prob = a.exact->convert_to<double>();
    }
  } else {
    for (auto& a : merged) {
      a.exact.reset();
      a.prob /= total;
    }
  }
  return StepDistribution(dim, std::move(merged));
}

StepDistribution simple_walk(int dim) {
  if (dim < 1) throw Error(ErrorCode::kParameterOutOfRange, "simple walk needs d >= 1");
  std::vector<Atom> atoms;
  const Rational mass(1, 2 * dim);
  for (int i = 0; i < dim; ++i) {
    for (int sign : {+1, -1}) {
      Site site(static_cast<std::size_t>(dim), 0);
      site[i] = sign;
      atoms.push_back({std::move(site), mass.convert_to<double>(), mass});
    }
  }
  return validate_distribution(std::move(atoms), dim);
}

StepDistribution biased_walk(const Probability& p) {
  if (!(p.value > 0.0 && p.value < 1.0)) {
    throw Error(ErrorCode::kParameterOutOfRange, "biased1d needs p in (0,1), got " + std::to_string(p.value));
  }
  std::vector<Atom> atoms;
  if (p.exact) {
    const Rational q = Rational(1) - *p.exact;
    atoms.push_back({Site{+1}, p.value, *p.exact});
    atoms.push_back({Site{-1}, q.convert_to<double>(), q});
  } else {
    atoms.push_back({Site{+1}, p.value, std::nullopt});
    atoms.push_back({Site{-1}, 1.0 - p.value, std::nullopt});
  }
  return validate_distribution(std::move(atoms), 1);
}

StepDistribution biased_walk(double p) { return biased_walk(Probability{p, std::nullopt}); }

StepDistribution deterministic_walk(int dim) {
  if (dim < 1) throw Error(ErrorCode::kParameterOutOfRange, "deterministic walk needs d >= 1");
  Site site(static_cast<std::size_t>(dim), 0);
  site[0] = 1;
  return validate_distribution({Atom{std::move(site), 1.0, Rational(1)}}, dim);
}

StepDistribution preset(std::string_view name, int dim, const std::optional<Probability>& p,
                        std::vector<Atom> atoms) {
  if (name == "simple") return simple_walk(dim);
  if (name == "biased1d") {
    if (!p) throw Error(ErrorCode::kParameterOutOfRange, "biased1d requires p");
    return biased_walk(*p);
  }
  if (name == "deterministic") return deterministic_walk(dim);
  if (name == "custom") return validate_distribution(std::move(atoms), dim);
  throw Error(ErrorCode::kUnknownPreset, "unknown preset '" + std::string(name) + "'");
}

std::optional<int> as_simple_walk(const StepDistribution& dist) {
  const int d = dist.dim();
  if (dist.size() != static_cast<std::size_t>(2 * d)) return std::nullopt;
  const double mass = 1.0 / (2.0 * d);
  for (const auto& a : dist.atoms()) {
    if (std::abs(a.prob - mass) > 1e-15) return std::nullopt;
    int nonzero = 0;
    for (auto c : a.site) {
      if (c == 0) continue;
      if (c != 1 && c != -1) return std::nullopt;
      ++nonzero;
    }
    if (nonzero != 1) return std::nullopt;
  }
  // 2d distinct unit vectors are necessarily +-e_i.
  return d;
}

std::optional<double> as_biased_walk(const StepDistribution& dist) {
  if (dist.dim() != 1 || dist.size() != 2) return std::nullopt;
  const auto& a = dist.atoms();
  if (a[0].site[0] == 1 && a[1].site[0] == -1) return a[0].prob;
  if (a[0].site[0] == -1 && a[1].site[0] == 1) return a[1].prob;
  return std::nullopt;
}

}  // namespace ltw
