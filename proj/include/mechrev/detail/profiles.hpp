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

#include <vector>

#include "mechrev/error.hpp"

namespace mechrev {

template <class F>
void for_each_profile(std::span<const DiscreteDist> bidders, std::size_t profile_cap, F &&f)
{
  std::size_t total = 1;
  for (const DiscreteDist &d : bidders)
  {
    if (total > profile_cap / d.size())
    {
      throw SizeError("value-profile product", total * d.size(), profile_cap);
    }
    total *= d.size();
  }
  std::size_t const m = bidders.size();
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> values(m);
  std::vector<double> prefix(m + 1, 1.0);
  for (std::size_t j = 0; j < m; ++j)
  {
    values[j] = bidders[j].support()[0];
    prefix[j + 1] = prefix[j] * bidders[j].probs()[0];
  }
  for (;;)
  {
    f(std::span<const double>(values), prefix[m]);
    std::size_t j = m;
    while (j > 0)
    {
      --j;
      if (++idx[j] < bidders[j].size())
      {
        break;
      }
      idx[j] = 0;
      if (j == 0)
      {
        return;
      }
    }
    if (m == 0)
    {
      return;
    }
    for (std::size_t k = j; k < m; ++k)
    {
      values[k] = bidders[k].support()[idx[k]];
      prefix[k + 1] = prefix[k] * bidders[k].probs()[idx[k]];
    }
  }
}

}  // namespace mechrev
