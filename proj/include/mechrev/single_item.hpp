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
#include <span>
#include <vector>

#include "mechrev/dist.hpp"
#include "mechrev/instance.hpp"

namespace mechrev {

/// Quantile-space revenue curve. Point 0 is (0, 0); point k >= 1 is
/// (Pr[v >= x_k], x_k Pr[v >= x_k]) with atoms x_k taken from the top down.
struct RevenueCurve
{
  std::vector<double> q;
  std::vector<double> revenue;
};

RevenueCurve revenue_curve(const DiscreteDist &d);

/// Ironed virtual value per support atom, in support order (ascending).
struct IronedVirtuals
{
  std::vector<double> phi;
  std::vector<bool> ironed;  // atom lies strictly inside a flattened interval
};

IronedVirtuals ironed_virtuals(const DiscreteDist &d);

struct MonopolyPrice
{
  double price;
  double revenue;
};

/// Lowest support atom maximising p Pr[v >= p].
MonopolyPrice monopoly_price(const DiscreteDist &d);

/// Myerson revenue E[max(0, max_j phi_j(v_j))] for independent bidders,
/// evaluated through the distribution of the largest ironed virtual value.
RevenueEstimate optimal_item_rev(std::span<const DiscreteDist> bidders);

/// p Pr[max_j v_j >= p].
double posted_price_rev(std::span<const DiscreteDist> bidders, double p);

/// Expected revenue of the second-price auction with reserve p, summed over
/// every value profile. Throws SizeError beyond `profile_cap` profiles.
double second_price_reserve_rev(std::span<const DiscreteDist> bidders, double p,
                                std::size_t profile_cap = 1'000'000);

/// Revenue of one value profile.
double posted_profile_rev(std::span<const double> values, double p);
double second_price_profile_rev(std::span<const double> values, double p);

/// Per-profile check of second-price(p) <= posted(p) + second-price(0).
struct SplitAudit
{
  std::size_t profiles = 0;
  double worst_slack = 0.0;  // min over profiles of rhs - lhs
  bool pass = true;
};

SplitAudit audit_split(std::span<const DiscreteDist> bidders, double p, std::size_t profile_cap = 1'000'000);

/// Calls f(values, prob) for every profile of independent bidders.
template <class F>
void for_each_profile(std::span<const DiscreteDist> bidders, std::size_t profile_cap, F &&f);

}  // namespace mechrev

#include "mechrev/detail/profiles.hpp"
