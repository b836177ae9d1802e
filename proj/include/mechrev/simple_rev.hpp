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

#include <algorithm>
#include <cstddef>
#include <vector>

#include "mechrev/instance.hpp"

namespace mechrev {

/// Disjoint nonempty blocks of item indices covering 0..n-1.
struct PartitionSpec
{
  std::vector<std::vector<std::size_t>> blocks;

  /// Throws ValidationError unless the blocks partition 0..n-1.
  void validate(std::size_t n) const;

  friend bool operator==(const PartitionSpec &, const PartitionSpec &) = default;
};

inline constexpr std::size_t kPartitionCap = 10;

RevenueEstimate srev(const MarketInstance &inst);

/// Per-buyer distribution of the value for the items in `block`.
std::vector<DiscreteDist> bundle_distributions(const MarketInstance &inst, const std::vector<std::size_t> &block,
                                               std::size_t support_cap = 1'000'000);

RevenueEstimate brev(const MarketInstance &inst, std::size_t support_cap = 1'000'000);

RevenueEstimate prev_on(const MarketInstance &inst, const PartitionSpec &part, std::size_t support_cap = 1'000'000);

struct PrevResult
{
  RevenueEstimate revenue;
  PartitionSpec best;
};

/// Best partition by exhaustive search. Ties go to more blocks, then to the
/// lexicographically smaller restricted-growth string.
PrevResult prev_exact(const MarketInstance &inst, std::size_t cap = kPartitionCap,
                      std::size_t support_cap = 1'000'000);

/// Calls f(rgs) for each restricted-growth string of length n in
/// lexicographic order.
template <class F>
void for_each_partition(std::size_t n, F &&f)
{
  if (n == 0)
  {
    return;
  }
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> top(n, 0);  // top[i] = max(a[0..i])
  for (;;)
  {
    f(static_cast<const std::vector<std::size_t> &>(a));
    std::size_t i = n - 1;
    while (i > 0 && a[i] > top[i - 1])
    {
      --i;
    }
    if (i == 0)
    {
      return;
    }
    ++a[i];
    top[i] = std::max(top[i - 1], a[i]);
    for (std::size_t k = i + 1; k < n; ++k)
    {
      a[k] = 0;
      top[k] = top[i];
    }
  }
}

}  // namespace mechrev
