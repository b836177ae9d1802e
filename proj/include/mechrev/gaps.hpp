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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mechrev/instance.hpp"
#include "mechrev/simple_rev.hpp"

namespace mechrev {

/// sqrt(n) buyers; every value is 0 w.p. 1 - 1/sqrt(n), else ER truncated at n^{1/8}.
MarketInstance gen_lb_many_iid(std::size_t n, ErGrid grid = {});

/// sqrt(n) buyers; buyer k values block k i.i.d. ER truncated at `truncation`
/// (default n) and every other item at 0.
MarketInstance gen_lb_prev_max(std::size_t n, std::optional<double> truncation = std::nullopt,
                               ErGrid grid = {ErGrid::Kind::integer, 0});

/// Blocks k = 1..L (L = log2 n) of near-equal size. Block k is active with
/// probability n^{-2k}; then each of its items is n^{2k} times an
/// independent ER draw truncated at n.
struct LbCorConstruction
{
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<double> scale;   // n^{2k}
  std::vector<double> active;  // n^{-2k}
  ErGrid grid;
  DiscreteDist er = DiscreteDist::point_mass(1.0);
  std::vector<DiscreteDist> block_sum;  // unscaled sum of ER draws per block

  PartitionSpec partition() const;
  DiscreteDist item_marginal(std::size_t block) const;
  double srev() const;
  /// Sum over blocks of the monopoly revenue of the block value.
  double prev_blocks() const;
  /// Monopoly revenue of the grand bundle with the lower active blocks
  /// replaced by their maximum (an upper bound on BRev) or by zero (a lower
  /// bound).
  double brev_upper() const;
  double brev_lower() const;
};

LbCorConstruction lb_cor_construction(std::size_t n, ErGrid grid = {ErGrid::Kind::integer, 0});

/// The same construction as an explicit joint. The ER grid is coarsened
/// until the support fits `support_budget`; throws SizeError if even a
/// two-atom grid does not fit.
MarketInstance gen_lb_cor(std::size_t n, std::size_t support_budget = 1'000'000, ErGrid *grid_used = nullptr);

struct SequentialSweep
{
  std::vector<std::size_t> bundle_sizes;
  std::vector<double> prices;  // shared grid when `price_per_item` is false
  bool price_per_item = false; // prices are multiplied by the bundle size
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// revenue[s][p]
  std::vector<std::vector<RevenueEstimate>> revenue;
};

/// Buyers arrive in index order. Each takes its `bundle_size` most valuable
/// available items (positive values first, highest value, then lowest index;
/// then the lowest-index available items it values at zero) and buys them
/// iff their total value is at least the price. All (size, price) pairs use
/// the same draws.
SequentialSweep sweep_sequential(const MarketInstance &inst, std::vector<std::size_t> bundle_sizes,
                                 std::vector<double> prices, bool price_per_item, std::uint64_t trials,
                                 std::uint64_t seed);

RevenueEstimate simulate_sequential(const MarketInstance &inst, std::size_t bundle_size, double price,
                                    std::uint64_t trials, std::uint64_t seed);

enum class GapKind
{
  many_iid,
  prev_max,
  cor
};

GapKind parse_gap_kind(const std::string &s);
std::string to_string(GapKind k);

struct GapConfig
{
  std::uint64_t trials = 100'000;
  std::size_t price_points = 16;
};

struct GapExperimentResult
{
  GapKind kind;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::optional<RevenueEstimate> srev;
  std::optional<RevenueEstimate> brev;
  std::optional<RevenueEstimate> prev_blocks;
  std::optional<RevenueEstimate> seq_rev;
  RevenueEstimate ratio;
  nlohmann::json config;  // inputs: construction parameters, grids, trial counts
  nlohmann::json detail;  // derived: optimal sweep point, bracket bounds
};

void to_json(nlohmann::json &j, const GapExperimentResult &r);

GapExperimentResult run_gap_point(GapKind kind, std::size_t n, std::uint64_t seed, const GapConfig &cfg = {});
std::vector<GapExperimentResult> run_gap_experiment(GapKind kind, const std::vector<std::size_t> &ns,
                                                    std::uint64_t seed, const GapConfig &cfg = {});

/// FNV-1a of the canonical JSON text.
std::uint64_t config_hash(const nlohmann::json &config);

/// CSV with a reproducibility comment line, a timestamp comment line and
/// one row per result.
void write_gap_csv(std::ostream &out, const std::vector<GapExperimentResult> &rows, const std::string &timestamp);

}  // namespace mechrev
