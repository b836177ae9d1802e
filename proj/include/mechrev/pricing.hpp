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
#include <vector>

#include <json.hpp>

#include "mechrev/dist.hpp"
#include "mechrev/instance.hpp"
#include "mechrev/single_item.hpp"

namespace mechrev {

/// Sell the items in `items` together at `price`.
struct PricingScheme
{
  std::vector<std::size_t> items;
  double price = 0.0;

  void validate(std::size_t n_items) const;
};

void to_json(nlohmann::json &j, const PricingScheme &s);

/// Pr[sum_{j in S} v_j >= price] for one consumer with independent items.
double purchase_prob(const std::vector<DiscreteDist> &items, const PricingScheme &scheme);

struct BundleResult
{
  std::vector<double> q;
  double c = 0.0;   // sum q_i p_i / sum p_i
  double c1 = 0.0;
  double d = 0.0;   // 1 - sqrt(1 - c1)
  PricingScheme combined;
  double revenue = 0.0;       // combined price times purchase probability
  double guarantee_c1 = 0.0;  // denominator read with c1 (asserted)
  double guarantee_c = 0.0;   // denominator read with c
  bool pass = false;
  bool markov_applicable = false;  // d < c
  double markov_lhs = 0.0;         // Pr[X >= d sum p_i]
  double markov_rhs = 0.0;         // (c - d) / (1 - d)
  bool markov_pass = true;
};

void to_json(nlohmann::json &j, const BundleResult &r);

/// BUNDLE: one price (1 - sqrt(1 - c1)) sum p_i on the union of disjoint
/// schemes that each sell with probability at least c1.
BundleResult bundle_combine(const std::vector<PricingScheme> &schemes, const std::vector<DiscreteDist> &items,
                            double c1);

struct ShatterResult
{
  std::vector<PricingScheme> per_item;
  std::vector<double> revenues;
  double total = 0.0;
};

void to_json(nlohmann::json &j, const ShatterResult &r);

/// SHATTER at per-item monopoly prices.
ShatterResult shatter(const PricingScheme &scheme, const std::vector<DiscreteDist> &items);

struct BrendanCase
{
  std::size_t item;
  unsigned j;
  double lhs;  // Pr[v_i >= p/2^j | V >= p]
  double rhs;  // 2 Pr[v_i >= p/2^j] + Pr[v_i >= p/2] / q
  bool pass;
};

struct BrendanReport
{
  double q = 0.0;       // Pr[V >= p]
  double q_half = 0.0;  // Pr[V >= p/2]
  bool vacuous = false; // q_half > 2q
  std::vector<BrendanCase> cases;
  bool pass = true;
};

void to_json(nlohmann::json &j, const BrendanReport &r);

BrendanReport check_brendan(const std::vector<DiscreteDist> &items, const std::vector<std::size_t> &S, double p,
                            unsigned j_max);

/// E[second highest value]; zero for one bidder.
double brev0(std::span<const DiscreteDist> bidders);

/// Exact revenue of posting the max of fresh samples as the price.
double random_reserve_exact(std::span<const DiscreteDist> bidders);

struct ReserveReport
{
  RevenueEstimate revenue;
  double brev0 = 0.0;
  double bound = 0.0;  // BRev_0 / 2
  bool pass = false;
};

void to_json(nlohmann::json &j, const ReserveReport &r);

ReserveReport random_reserve_sim(std::span<const DiscreteDist> bidders, std::uint64_t trials, std::uint64_t seed);
ReserveReport random_reserve_check(std::span<const DiscreteDist> bidders);

struct CorollaryReport
{
  double best_auction = 0.0;  // max_p second-price revenue with reserve p
  double best_auction_price = 0.0;
  double best_posted = 0.0;   // max_p posted revenue
  double best_posted_price = 0.0;
  bool pass = false;
};

void to_json(nlohmann::json &j, const CorollaryReport &r);

/// Prices range over 0 and every support value.
CorollaryReport check_pricing_corollary(std::span<const DiscreteDist> bidders, std::size_t profile_cap = 1'000'000);

struct SplitReport
{
  std::vector<double> prices;
  std::size_t profiles = 0;
  double worst_slack = 0.0;
  bool pass = true;
};

void to_json(nlohmann::json &j, const SplitReport &r);

/// Per-profile second-price(p) <= posted(p) + second-price(0) at every grid price.
SplitReport check_split(std::span<const DiscreteDist> bidders, std::size_t profile_cap = 1'000'000);

}  // namespace mechrev
