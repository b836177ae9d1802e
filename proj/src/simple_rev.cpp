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

#include "mechrev/simple_rev.hpp"

#include <cmath>
#include <limits>

#include "mechrev/error.hpp"
#include "mechrev/single_item.hpp"

namespace mechrev {

void PartitionSpec::validate(std::size_t n) const
{
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (const auto &block : blocks)
  {
    if (block.empty())
    {
      throw ValidationError("partition", "empty block");
    }
    for (std::size_t i : block)
    {
      if (i >= n)
      {
        throw ValidationError("partition", "item " + std::to_string(i) + " out of range");
      }
      if (seen[i])
      {
        throw ValidationError("partition", "item " + std::to_string(i) + " appears twice");
      }
      seen[i] = true;
      ++covered;
    }
  }
  if (covered != n)
  {
    throw ValidationError("partition", "blocks do not cover every item");
  }
}

RevenueEstimate srev(const MarketInstance &inst)
{
  double total = 0.0;
  for (std::size_t i = 0; i < inst.n_items(); ++i)
  {
    if (inst.is_correlated())
    {
      total += monopoly_price(inst.marginal(i)).revenue;
    }
    else
    {
      total += optimal_item_rev(inst.item_bidders(i)).value;
    }
  }
  return RevenueEstimate::exact(total);
}

std::vector<DiscreteDist> bundle_distributions(const MarketInstance &inst, const std::vector<std::size_t> &block,
                                               std::size_t support_cap)
{
  if (block.empty())
  {
    throw ValidationError("block", "bundle must contain an item");
  }
  if (inst.is_correlated())
  {
    return {inst.joint().sum_over(block)};
  }
  std::vector<DiscreteDist> out;
  out.reserve(inst.n_buyers());
  for (std::size_t j = 0; j < inst.n_buyers(); ++j)
  {
    DiscreteDist acc = inst.grid().at(block[0])[j];
    for (std::size_t k = 1; k < block.size(); ++k)
    {
      acc = convolve(acc, inst.grid().at(block[k])[j], support_cap);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

RevenueEstimate brev(const MarketInstance &inst, std::size_t support_cap)
{
  std::vector<std::size_t> all(inst.n_items());
  for (std::size_t i = 0; i < all.size(); ++i)
  {
    all[i] = i;
  }
  return optimal_item_rev(bundle_distributions(inst, all, support_cap));
}

RevenueEstimate prev_on(const MarketInstance &inst, const PartitionSpec &part, std::size_t support_cap)
{
  part.validate(inst.n_items());
  double total = 0.0;
  for (const auto &block : part.blocks)
  {
    total += optimal_item_rev(bundle_distributions(inst, block, support_cap)).value;
  }
  return RevenueEstimate::exact(total);
}

PrevResult prev_exact(const MarketInstance &inst, std::size_t cap, std::size_t support_cap)
{
  std::size_t const n = inst.n_items();
  if (n > cap || n > 20)
  {
    throw SizeError("partition enumeration over items (use prev_on with explicit partitions)", n, std::min<std::size_t>(cap, 20));
  }
  std::vector<double> cache(std::size_t{1} << n, std::numeric_limits<double>::quiet_NaN());
  auto block_rev = [&](std::uint32_t mask) {
    double &slot = cache[mask];
    if (std::isnan(slot))
    {
      std::vector<std::size_t> block;
      for (std::size_t i = 0; i < n; ++i)
      {
        if (mask >> i & 1U)
        {
          block.push_back(i);
        }
      }
      slot = optimal_item_rev(bundle_distributions(inst, block, support_cap)).value;
    }
    return slot;
  };

  double best = -1.0;
  std::size_t best_blocks = 0;
  std::vector<std::size_t> best_rgs;
  std::vector<std::uint32_t> masks(n);
  for_each_partition(n, [&](const std::vector<std::size_t> &rgs) {
    std::fill(masks.begin(), masks.end(), 0U);
    std::size_t blocks = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
      masks[rgs[i]] |= 1U << i;
      blocks = std::max(blocks, rgs[i] + 1);
    }
    double total = 0.0;
    for (std::size_t b = 0; b < blocks; ++b)
    {
      total += block_rev(masks[b]);
    }
    bool const tie = same_value(total, best);
    if ((!tie && total > best) || (tie && blocks > best_blocks))
    {
      best = total;
      best_blocks = blocks;
      best_rgs = rgs;
    }
  });

  PrevResult out{RevenueEstimate::exact(best), {}};
  out.best.blocks.resize(best_blocks);
  for (std::size_t i = 0; i < n; ++i)
  {
    out.best.blocks[best_rgs[i]].push_back(i);
  }
  return out;
}

}  // namespace mechrev
