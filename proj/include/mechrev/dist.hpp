// Copyright 2026 The mechrev Authors
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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mechrev {

/// Tolerance used when merging atoms whose values coincide.
inline constexpr double kValueTol = 1e-12;

/// True if `a` and `b` are the same value up to kValueTol (relative above 1).
bool same_value(double a, double b);

/// `v >= threshold` up to kValueTol; used for every "willing to pay" test.
bool at_least(double v, double threshold);

/// One value/probability pair.
struct Atom
{
  double value;
  double prob;
};

/// A one-dimensional value distribution with finite support.
///
/// Support is strictly increasing and nonnegative, every stored atom has
/// positive probability and the probabilities sum to one. Instances are
/// immutable once built.
class DiscreteDist
{
public:
  /// Validates `support`/`probs` as given (no sorting, no merging).
  /// Probabilities must sum to one within `sum_tol`; they are then
  /// renormalised.
  DiscreteDist(std::vector<double> support, std::vector<double> probs, double sum_tol = 1e-12);

  static DiscreteDist point_mass(double value);

  /// Sorts, merges equal values, drops zero-probability atoms and
  /// renormalises. Total weight must be one within `sum_tol`.
  static DiscreteDist from_atoms(std::vector<Atom> atoms, double sum_tol = 1e-9);

  std::span<const double> support() const noexcept
  {
    return support_;
  }
  std::span<const double> probs() const noexcept
  {
    return probs_;
  }
  std::size_t size() const noexcept
  {
    return support_.size();
  }
  double min() const noexcept
  {
    return support_.front();
  }
  double max() const noexcept
  {
    return support_.back();
  }
  bool is_point_mass() const noexcept
  {
    return support_.size() == 1;
  }

  /// Pr[v >= x] (with at_least semantics).
  double prob_at_least(double x) const;
  /// Pr[v > x] (strict, beyond kValueTol).
  double prob_greater(double x) const;

  /// Inverse-CDF sample for u in [0, 1).
  double quantile(double u) const;

  std::vector<Atom> atoms() const;

  friend bool operator==(const DiscreteDist &, const DiscreteDist &) = default;

private:
  DiscreteDist() = default;

  std::vector<double> support_;
  std::vector<double> probs_;
  std::vector<double> upper_cdf_;  // upper_cdf_[k] = Pr[v >= support_[k]]
  void build_cache();
};

/// Result of splitting a distribution at a threshold. A missing part is
/// the null distribution (conditioning event of probability zero).
struct ConditionalSplit
{
  std::optional<DiscreteDist> core;  // v <= threshold
  std::optional<DiscreteDist> tail;  // v > threshold
  double p_tail = 0.0;
};

/// Distribution of X + Y for independent X ~ a, Y ~ b. Throws SizeError if
/// the merged support would exceed `support_cap` atoms.
DiscreteDist convolve(const DiscreteDist &a, const DiscreteDist &b, std::size_t support_cap = 1'000'000);

/// Sum of independent variables, folded left to right.
DiscreteDist convolve_all(std::span<const DiscreteDist> parts, std::size_t support_cap = 1'000'000);

/// Distribution of max(X, Y) for independent X ~ a, Y ~ b.
DiscreteDist max_dist(const DiscreteDist &a, const DiscreteDist &b);

/// Expectation.
double welfare(const DiscreteDist &d);

double variance(const DiscreteDist &d);

ConditionalSplit condition_split(const DiscreteDist &d, double threshold);

/// Multiplies every value by `factor` (> 0).
DiscreteDist scale(const DiscreteDist &d, double factor);

/// weights[k] * parts[k], weights summing to one.
DiscreteDist mixture(std::span<const double> weights, std::span<const DiscreteDist> parts);

/// Grid used to discretise the truncated Equal-Revenue distribution.
struct ErGrid
{
  enum class Kind
  {
    geometric,  // `atoms` points M^{k/(atoms-1)}
    integer     // every integer 1..floor(M), plus M itself if fractional
  };
  Kind kind = Kind::geometric;
  std::size_t atoms = 64;
};

/// Equal-Revenue distribution Pr[v >= x] = 1/x on [1, M], all mass above M
/// moved to an atom at M. Exact at every grid point, so every grid price
/// earns revenue one.
DiscreteDist er_truncated(double M, ErGrid grid = {});

/// k atoms of mass 1/k at a + (i + 1/2)(b - a)/k.
DiscreteDist uniform_grid(double a, double b, std::size_t k);

/// q * d + (1 - q) * point_mass(0).
DiscreteDist zero_inflate(const DiscreteDist &d, double q);

}  // namespace mechrev
