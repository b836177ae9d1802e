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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mechrev/dist.hpp"

namespace mechrev {

/// A finite joint distribution of value vectors for a single buyer.
class JointDist
{
public:
  /// Sorts points lexicographically, merges duplicates and drops zero mass.
  /// Every point must have the same dimension and nonnegative coordinates.
  JointDist(std::vector<std::vector<double>> points, std::vector<double> probs, double sum_tol = 1e-9);

  /// Product of independent one-dimensional distributions.
  static JointDist product(std::span<const DiscreteDist> items, std::size_t support_cap);

  std::size_t dim() const noexcept
  {
    return dim_;
  }
  std::size_t size() const noexcept
  {
    return probs_.size();
  }
  std::vector<double> const &point(std::size_t k) const
  {
    return points_[k];
  }
  std::vector<std::vector<double>> const &points() const noexcept
  {
    return points_;
  }
  std::vector<double> const &probs() const noexcept
  {
    return probs_;
  }

  DiscreteDist marginal(std::size_t item) const;
  /// Distribution of the sum of the coordinates in `items` (all if empty).
  DiscreteDist sum_over(std::span<const std::size_t> items) const;
  DiscreteDist sum_all() const;

private:
  std::size_t dim_ = 0;
  std::vector<std::vector<double>> points_;
  std::vector<double> probs_;
};

/// n items and m buyers: either independent per-(item, buyer) distributions
/// or an explicit correlated joint for a single buyer.
class MarketInstance
{
public:
  /// `grid[item][buyer]`.
  static MarketInstance independent(std::string label, std::vector<std::vector<DiscreteDist>> grid);
  /// One buyer, item i distributed as `items[i]`.
  static MarketInstance single_buyer(std::string label, std::vector<DiscreteDist> items);
  static MarketInstance correlated(std::string label, JointDist joint);

  std::string const &label() const noexcept
  {
    return label_;
  }
  std::size_t n_items() const noexcept
  {
    return n_items_;
  }
  std::size_t n_buyers() const noexcept
  {
    return n_buyers_;
  }
  bool is_correlated() const noexcept
  {
    return joint_.has_value();
  }

  /// Independent case only.
  std::vector<std::vector<DiscreteDist>> const &grid() const;
  /// The m bidder distributions for item i (independent case).
  std::vector<DiscreteDist> const &item_bidders(std::size_t item) const;
  /// The n item distributions for buyer j (independent case).
  std::vector<DiscreteDist> buyer_items(std::size_t buyer) const;

  /// Correlated case only.
  JointDist const &joint() const;

  /// Single-buyer marginal of item i, either case.
  DiscreteDist marginal(std::size_t item) const;

  /// Explicit joint support of a single-buyer instance; product instances
  /// are expanded (throws SizeError beyond `support_cap` points).
  JointDist to_joint(std::size_t support_cap) const;

private:
  MarketInstance() = default;

  std::string label_;
  std::size_t n_items_ = 0;
  std::size_t n_buyers_ = 0;
  std::vector<std::vector<DiscreteDist>> grid_;
  std::optional<JointDist> joint_;
};

/// A revenue number and where it came from.
struct RevenueEstimate
{
  enum class Kind
  {
    exact,
    monte_carlo
  };

  double value = 0.0;
  Kind kind = Kind::exact;
  std::uint64_t samples = 0;
  double std_error = 0.0;
  std::optional<std::uint64_t> seed;

  static RevenueEstimate exact(double value);
  static RevenueEstimate monte_carlo(double value, std::uint64_t samples, double std_error, std::uint64_t seed);
};

void to_json(nlohmann::json &j, RevenueEstimate const &r);
void to_json(nlohmann::json &j, DiscreteDist const &d);

/// Parses the instance document; throws ValidationError whose field() is
/// the JSON pointer of the offending element.
MarketInstance instance_from_json(nlohmann::json const &doc);
MarketInstance load_instance(std::filesystem::path const &path);
nlohmann::json instance_to_json(MarketInstance const &inst);

}  // namespace mechrev
