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

#ifndef LTWALK_STEP_DISTRIBUTION_HPP
#define LTWALK_STEP_DISTRIBUTION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ltw {

// A lattice point or increment in Z^d.
using Site = std::vector<std::int64_t>;

// Exact probabilities; only exact_analysis consumes these.
using Rational = boost::multiprecision::cpp_rational;

struct Probability {
  double value = 0.0;
  std::optional<Rational> exact;
};

// Parses "2/3", "0.25", "1e-3". Fractions and plain decimals also yield an
// exact rational; exponent notation yields a double only.
Probability parse_probability(std::string_view text);

struct Atom {
  Site site;
  double prob = 0.0;
  std::optional<Rational> exact;
};

// Finite-support law of a single increment X_i on Z^d. Construct through
// validate_distribution() or one of the presets; instances are always
// normalized, with strictly positive masses and merged duplicate sites.
class StepDistribution {
 public:
  int dim() const noexcept { return dim_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  // Largest sup-norm over the support.
  std::int64_t max_radius() const noexcept { return max_radius_; }
  // True when every atom carries an exact rational mass summing to one.
  bool has_exact() const noexcept { return has_exact_; }

  std::vector<double> drift() const;
  bool is_centered(double tol = 1e-12) const;
  // Rank of the span of pairwise differences of support points; the local
  // limit exponent of P{S_n = 0} is rank / 2.
  int difference_rank() const;

  std::string describe() const;

 private:
  friend StepDistribution validate_distribution(std::vector<Atom> atoms, int dim);
  StepDistribution(int dim, std::vector<Atom> atoms);

  int dim_ = 1;
  std::vector<Atom> atoms_;
  std::int64_t max_radius_ = 0;
  bool has_exact_ = false;
};

// Checks and normalizes a raw atom list. Duplicate sites are merged by
// summing their mass; zero-mass atoms are dropped. Throws NegativeProbability,
// EmptySupport, DimensionMismatch or MassNotOne (|sum - 1| > 1e-9).
StepDistribution validate_distribution(std::vector<Atom> atoms, int dim);

// 2d atoms +-e_i with mass 1/(2d).
StepDistribution simple_walk(int dim);
// +1 with mass p, -1 with mass 1-p; p in (0, 1).
StepDistribution biased_walk(const Probability& p);
StepDistribution biased_walk(double p);
// Single atom +e_1: l(n, x) is 0 or 1 for every site.
StepDistribution deterministic_walk(int dim = 1);

// Named presets: "simple" (uses dim), "biased1d" (uses p), "deterministic",
// "custom" (uses atoms). Throws UnknownPreset / ParameterOutOfRange.
StepDistribution preset(std::string_view name, int dim, const std::optional<Probability>& p,
                        std::vector<Atom> atoms = {});

// Structural recognizers used to select closed-form return probabilities.
std::optional<int> as_simple_walk(const StepDistribution& dist);
std::optional<double> as_biased_walk(const StepDistribution& dist);

}  // namespace ltw

#endif  // LTWALK_STEP_DISTRIBUTION_HPP
